"""
Versioned JSON manifests for light-field, disparity and capture directories
"""

import json
from pathlib import Path
from typing import List, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from lf_core.errors import LightFieldFormatError

from .atomic import PathLike, atomic_write_text, read_bytes

FORMAT_VERSION = "1.0"
MANIFEST_NAME = "manifest.json"

ModelT = TypeVar("ModelT", bound=BaseModel)


def check_format_version(version: str, what: str, supported: str = FORMAT_VERSION) -> None:
    """Reject any major version other than the supported one"""
    try:
        major = int(str(version).split(".")[0])
    except ValueError as e:
        raise LightFieldFormatError(f"{what}: unreadable format version {version!r}") from e
    if major != int(supported.split(".")[0]):
        raise LightFieldFormatError(f"{what}: unsupported format version {version} (supported: {supported})")


class _Manifest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    format_version: str = FORMAT_VERSION
    A_u: int = Field(ge=1)
    A_v: int = Field(ge=1)
    H: int = Field(ge=2)
    W: int = Field(ge=2)

    @field_validator("A_u", "A_v")
    @classmethod
    def _odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError(f"angular extents must be odd, got {value}")
        return value


class LfManifest(_Manifest):
    """Sub-aperture view directory description"""
    kind: str = "light_field"
    channels: int = Field(ge=1, le=3)
    value_range: Tuple[float, float] = (0.0, 1.0)
    bit_depth: int = 16
    view_pattern: str = "view_{row}_{col}.png"
    # declared only; stored values are never gamma-transformed
    gamma: Optional[str] = "unknown"

    def view_name(self, row: int, col: int) -> str:
        return self.view_pattern.format(row=row, col=col)


class DisparityManifest(_Manifest):
    """Per-view PFM disparity directory description"""
    kind: str = "disparity"
    d_max: float = Field(gt=0)
    file_pattern: str = "disparity_{row}_{col}.pfm"

    def file_name(self, row: int, col: int) -> str:
        return self.file_pattern.format(row=row, col=col)


class CaptureManifest(_Manifest):
    """Simulated capture directory: coded images, their models and the optional all-in-focus image"""
    kind: str = "capture"
    scheme: str
    seed: int
    coded: List[str] = Field(min_length=1)
    models: List[str] = Field(min_length=1)
    allinfocus: Optional[str] = None

    @model_validator(mode="after")
    def _paired(self) -> "CaptureManifest":
        if len(self.coded) != len(self.models):
            raise ValueError(f"{len(self.coded)} coded images but {len(self.models)} models")
        return self


def dump_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


def write_manifest(directory: PathLike, manifest: BaseModel) -> Path:
    return atomic_write_text(Path(directory) / MANIFEST_NAME, dump_json(manifest))


def read_manifest(directory: PathLike, model: Type[ModelT]) -> ModelT:
    path = Path(directory) / MANIFEST_NAME
    raw = read_bytes(path)
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise LightFieldFormatError(f"{path}: not a JSON manifest: {e}") from e
    if not isinstance(data, dict):
        raise LightFieldFormatError(f"{path}: manifest must be a JSON object")
    check_format_version(data.get("format_version", "missing"), str(path))
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise LightFieldFormatError(f"{path}: invalid manifest: {e}") from e
