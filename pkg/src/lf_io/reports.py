"""
JSON report files
"""

import json
from pathlib import Path
from typing import Type

from pydantic import BaseModel, ValidationError

from lf_core.errors import LightFieldFormatError

from .atomic import PathLike, atomic_write_text, read_bytes
from .manifest import ModelT, dump_json


def save_report(report: BaseModel, path: PathLike) -> Path:
    return atomic_write_text(path, dump_json(report))


def load_report(path: PathLike, model: Type[ModelT]) -> ModelT:
    path = Path(path)
    try:
        return model.model_validate(json.loads(read_bytes(path).decode("utf-8")))
    except (UnicodeDecodeError, json.JSONDecodeError, ValidationError) as e:
        raise LightFieldFormatError(f"{path}: invalid report: {e}") from e
