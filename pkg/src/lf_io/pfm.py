"""
Portable Float Map reader and writer

Header: ``Pf`` (one channel) or ``PF`` (three channels), ``width height``, then a scale
whose sign gives the byte order (negative: little-endian). Rows are stored bottom to top.
This module always writes little-endian float32 with scale ``-1.0``.
"""

import re
from typing import Tuple

import numpy as np

from lf_core.errors import LightFieldFormatError, LightFieldShapeError

from .atomic import PathLike, atomic_write_bytes, read_bytes

_HEADER = re.compile(rb"^(P[Ff])\s+(\d+)\s+(\d+)\s+([-+0-9.eE]+)\s", re.DOTALL)


def encode_pfm(image: np.ndarray) -> bytes:
    """Serialize an ``(H, W)``, ``(H, W, 1)`` or ``(H, W, 3)`` array"""
    arr = np.asarray(image)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[..., 0]
    if arr.ndim == 2:
        tag = b"Pf"
    elif arr.ndim == 3 and arr.shape[2] == 3:
        tag = b"PF"
    else:
        raise LightFieldShapeError(f"PFM holds 1 or 3 channels, got array of shape {arr.shape}")
    height, width = arr.shape[:2]
    payload = np.ascontiguousarray(np.flipud(arr), dtype="<f4").tobytes()
    return tag + f"\n{width} {height}\n-1.0\n".encode("ascii") + payload


def decode_pfm(data: bytes, name: str = "<pfm>") -> Tuple[np.ndarray, float]:
    """Parse PFM bytes into a float32 ``(H, W)`` or ``(H, W, 3)`` array and the scale magnitude"""
    match = _HEADER.match(data)
    if match is None:
        raise LightFieldFormatError(f"{name}: malformed PFM header")
    tag, width, height, scale = match.group(1), int(match.group(2)), int(match.group(3)), match.group(4)
    try:
        scale = float(scale)
    except ValueError as e:
        raise LightFieldFormatError(f"{name}: malformed PFM scale {scale!r}") from e
    if scale == 0.0 or width < 1 or height < 1:
        raise LightFieldFormatError(f"{name}: invalid PFM header values")

    channels = 3 if tag == b"PF" else 1
    dtype = "<f4" if scale < 0 else ">f4"
    offset = match.end()
    expected = width * height * channels * 4
    if len(data) - offset != expected:
        raise LightFieldFormatError(f"{name}: PFM payload has {len(data) - offset} bytes, expected {expected}")

    arr = np.frombuffer(data, dtype=dtype, count=width * height * channels, offset=offset)
    shape = (height, width, 3) if channels == 3 else (height, width)
    arr = np.flipud(arr.reshape(shape)).astype(np.float32)
    return arr, abs(scale)


def write_pfm(path: PathLike, image: np.ndarray) -> None:
    atomic_write_bytes(path, encode_pfm(image))


def read_pfm(path: PathLike) -> np.ndarray:
    arr, _ = decode_pfm(read_bytes(path), str(path))
    return arr
