"""
Solver configuration
"""

import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from lf_core.errors import LightFieldIOError, SolverConfigError

UNIT_OFFSETS: List[Tuple[int, int]] = [(1, 0), (-1, 0), (0, 1), (0, -1)]


class SolverMode(str, Enum):
    SUPERVISED = "supervised"
    MEASUREMENT = "measurement"


class SolverConfig(BaseModel):
    """Optimizer hyperparameters and regularizer weights.

    Unknown fields are rejected so a typo in a JSON config fails loudly.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    lambda_dc: float = Field(0.008, ge=0)
    lambda_tv: float = Field(0.01, ge=0)
    d_max: float = Field(10.0, gt=0)
    pyramid_levels: int = Field(4, ge=1)
    iters_per_level: int = Field(300, ge=0)
    step_size: float = Field(0.05, gt=0)
    robust_eps: float = Field(1e-3, gt=0)
    multi_start_signs: bool = True
    seed: int = 0
    mode: SolverMode = SolverMode.MEASUREMENT

    q_set: List[Tuple[int, int]] = Field(default_factory=lambda: list(UNIT_OFFSETS))
    init_magnitude: float = Field(0.05, gt=0)
    tie_views_at_coarsest: bool = True
    max_backtracks: int = Field(12, ge=0)
    armijo: float = Field(1e-4, ge=0, lt=1)
    tie_tolerance: float = Field(1e-9, ge=0)
    # a level stops once the last converge_window steps gained less than converge_rtol (relative)
    converge_rtol: float = Field(1e-3, ge=0)
    converge_window: int = Field(10, ge=1)
    # side of the square window over which the two sign branches' residuals are compared
    sign_patch: int = Field(5, ge=1)

    @field_validator("q_set")
    @classmethod
    def _check_q_set(cls, value: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        if not value:
            raise ValueError("q_set must not be empty")
        if any(tuple(q) == (0, 0) for q in value):
            raise ValueError("q_set must not contain the zero offset")
        return [tuple(int(c) for c in q) for q in value]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SolverConfig":
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise SolverConfigError(f"invalid solver config: {e}") from e

    @classmethod
    def from_json_file(cls, path: Union[str, Path]) -> "SolverConfig":
        path = Path(path)
        if not path.is_file():
            raise LightFieldIOError(f"solver config not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise SolverConfigError(f"solver config {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise SolverConfigError(f"solver config {path} must hold a JSON object")
        return cls.from_dict(data)

    def with_overrides(self, overrides: Dict[str, Any]) -> "SolverConfig":
        """Copy with fields replaced, re-validated"""
        if not overrides:
            return self
        return self.from_dict({**self.model_dump(mode="json"), **overrides})

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


def parse_override(text: str) -> Tuple[str, Any]:
    """Parse ``key=value``; the value is read as JSON when possible, else kept as a string"""
    if "=" not in text:
        raise SolverConfigError(f"override must look like key=value, got {text!r}")
    key, raw = text.split("=", 1)
    key = key.strip()
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw.strip()
    return key, value
