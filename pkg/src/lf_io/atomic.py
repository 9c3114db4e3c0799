"""
Write-temp-then-rename file output
"""

import logging
import os
import tempfile
from pathlib import Path
from typing import Union

from lf_core.errors import LightFieldIOError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def atomic_write_bytes(path: PathLike, data: bytes) -> Path:
    """Write ``data`` next to ``path`` under a temporary name, then rename over ``path``"""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    except OSError as e:
        raise LightFieldIOError(f"cannot write {path}: {e}") from e

    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except OSError as e:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise LightFieldIOError(f"cannot write {path}: {e}") from e

    logger.debug(f"💾 Wrote {path} ({len(data):,} bytes)")
    return path


def atomic_write_text(path: PathLike, text: str) -> Path:
    return atomic_write_bytes(path, text.encode("utf-8"))


def read_bytes(path: PathLike) -> bytes:
    path = Path(path)
    try:
        return path.read_bytes()
    except FileNotFoundError as e:
        raise LightFieldIOError(f"file not found: {path}") from e
    except OSError as e:
        raise LightFieldIOError(f"cannot read {path}: {e}") from e
