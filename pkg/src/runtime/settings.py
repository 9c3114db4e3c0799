"""
Environment-driven settings
"""

import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from lf_core.errors import SolverConfigError

# Load environment variables
load_dotenv()

DEFAULT_LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


@dataclass(frozen=True)
class Settings:
    log_level: str
    log_format: str
    default_seed: int
    solver_config_path: Optional[str]


def load_settings() -> Settings:
    """Read ``LFCODED_*`` variables (a ``.env`` file in the working directory is honored)"""
    raw_seed = os.getenv("LFCODED_DEFAULT_SEED", "0")
    try:
        seed = int(raw_seed)
    except ValueError as e:
        raise SolverConfigError(f"LFCODED_DEFAULT_SEED must be an integer, got {raw_seed!r}") from e
    return Settings(
        log_level=os.getenv("LFCODED_LOG_LEVEL", "INFO").upper(),
        log_format=os.getenv("LFCODED_LOG_FORMAT", DEFAULT_LOG_FORMAT),
        default_seed=seed,
        solver_config_path=os.getenv("LFCODED_SOLVER_CONFIG") or None,
    )
