"""
Single-image I/O: 16-bit PNG for radiance, PFM for floats
"""

import io
from pathlib import Path

import numpy as np
import png

from lf_core.errors import LightFieldFormatError, LightFieldIOError, LightFieldValueError
from lf_core.light_field import VALUE_TOLERANCE, as_image

from .atomic import PathLike, atomic_write_bytes, read_bytes
from .pfm import decode_pfm, encode_pfm

PNG_MAX = 65535


def quantize(image: np.ndarray) -> np.ndarray:
    """[0, 1] values to uint16 by rounding ``value * 65535``"""
    image = as_image(image)
    if image.min() < -VALUE_TOLERANCE or image.max() > 1.0 + VALUE_TOLERANCE:
        raise LightFieldValueError(f"PNG radiance must lie in [0, 1], got [{image.min():.6g}, {image.max():.6g}]")
    return np.rint(np.clip(image, 0.0, 1.0) * PNG_MAX).astype(np.uint16)


def encode_png16(image: np.ndarray) -> bytes:
    codes = quantize(image)
    height, width, channels = codes.shape
    writer = png.Writer(width=width, height=height, greyscale=(channels == 1), bitdepth=16)
    buffer = io.BytesIO()
    writer.write(buffer, codes.reshape(height, width * channels).tolist())
    return buffer.getvalue()


def decode_png(data: bytes, name: str = "<png>") -> np.ndarray:
    """Decode any PNG to float64 ``(H, W, C)`` in [0, 1]; alpha is dropped"""
    try:
        width, height, rows, info = png.Reader(bytes=data).asDirect()
        pixels = np.vstack([np.asarray(row, dtype=np.uint32) for row in rows])
    except png.Error as e:
        raise LightFieldFormatError(f"{name}: unreadable PNG: {e}") from e

    planes = info["planes"]
    image = pixels.reshape(height, width, planes)
    if info.get("alpha"):
        image = image[..., :-1]
    return image.astype(np.float64) / float(2 ** info["bitdepth"] - 1)


def save_png16(path: PathLike, image: np.ndarray) -> None:
    atomic_write_bytes(path, encode_png16(image))


def load_png(path: PathLike) -> np.ndarray:
    return decode_png(read_bytes(path), str(path))


def save_image(path: PathLike, image: np.ndarray) -> None:
    """16-bit PNG or PFM depending on the suffix"""
    suffix = Path(path).suffix.lower()
    if suffix == ".png":
        save_png16(path, image)
    elif suffix == ".pfm":
        atomic_write_bytes(path, encode_pfm(as_image(image)))
    else:
        raise LightFieldFormatError(f"unsupported image format {suffix!r} for {path}")


def load_image(path: PathLike) -> np.ndarray:
    """Load a PNG or PFM image as float64 ``(H, W, C)``"""
    path = Path(path)
    if not path.is_file():
        raise LightFieldIOError(f"image not found: {path}")
    suffix = path.suffix.lower()
    if suffix == ".png":
        return load_png(path)
    if suffix == ".pfm":
        arr, _ = decode_pfm(read_bytes(path), str(path))
        return as_image(arr.astype(np.float64))
    raise LightFieldFormatError(f"unsupported image format {suffix!r} for {path}")
