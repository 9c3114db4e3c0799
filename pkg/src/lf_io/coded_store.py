"""
Coded images (PFM + JSON sidecar) and coded-model containers

Model container layout (``.lfcm``)::

    8 bytes   magic "LFCMODEL"
    4 bytes   little-endian uint32 header length N
    N bytes   UTF-8 JSON header (scheme, extents, generator parameters, versions)
    rest      little-endian float32 weights, (u, v, y, x) row-major
"""

import json
import logging
import struct
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from lf_core.errors import LightFieldFormatError
from lf_sensing.models import MODEL_FORMAT_VERSION, CodedModel, ModelHeader
from lf_sensing.simulate import UNKNOWN_PROVENANCE, CodedImage

from .atomic import PathLike, atomic_write_bytes, atomic_write_text, read_bytes
from .manifest import FORMAT_VERSION, check_format_version
from .pfm import decode_pfm, encode_pfm

logger = logging.getLogger(__name__)

MODEL_MAGIC = b"LFCMODEL"


def sidecar_path(path: PathLike) -> Path:
    return Path(path).with_suffix(".json")


def save_coded(coded: CodedImage, path: PathLike) -> Path:
    path = Path(path)
    atomic_write_bytes(path, encode_pfm(coded.data))
    sidecar = {
        "format_version": FORMAT_VERSION,
        "kind": "coded_image",
        "normalized": coded.normalized,
        "channels": int(coded.data.shape[2]),
        "provenance": coded.provenance,
    }
    atomic_write_text(sidecar_path(path), json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return path


def load_coded(path: PathLike) -> CodedImage:
    """Load a coded image; without a sidecar the provenance is marked unknown"""
    path = Path(path)
    data, _ = decode_pfm(read_bytes(path), str(path))
    data = data.astype(np.float64)

    sidecar = sidecar_path(path)
    if not sidecar.is_file():
        logger.warning(f"⚠️ No sidecar for {path}; provenance unknown")
        return CodedImage(
            data=data,
            normalized=bool(data.max() <= 1.0),
            provenance=dict(UNKNOWN_PROVENANCE),
            provenance_known=False,
        )

    try:
        meta = json.loads(read_bytes(sidecar).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise LightFieldFormatError(f"{sidecar}: not a JSON sidecar: {e}") from e
    check_format_version(meta.get("format_version", "missing"), str(sidecar))
    return CodedImage(
        data=data,
        normalized=bool(meta.get("normalized", True)),
        provenance=dict(meta.get("provenance") or UNKNOWN_PROVENANCE),
        provenance_known=True,
    )


def encode_model(model: CodedModel) -> bytes:
    header = json.dumps(model.provenance(), sort_keys=True, separators=(",", ":")).encode("utf-8")
    payload = np.ascontiguousarray(model.weights, dtype="<f4").tobytes()
    return MODEL_MAGIC + struct.pack("<I", len(header)) + header + payload


def decode_model(data: bytes, name: str = "<model>") -> CodedModel:
    if data[:len(MODEL_MAGIC)] != MODEL_MAGIC:
        raise LightFieldFormatError(f"{name}: not a coded-model container")
    start = len(MODEL_MAGIC) + 4
    if len(data) < start:
        raise LightFieldFormatError(f"{name}: truncated header")
    (length,) = struct.unpack("<I", data[len(MODEL_MAGIC):start])
    try:
        raw = json.loads(data[start:start + length].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise LightFieldFormatError(f"{name}: unreadable model header: {e}") from e
    check_format_version(raw.get("format_version", "missing"), name, MODEL_FORMAT_VERSION)
    try:
        header = ModelHeader.model_validate(raw)
    except ValidationError as e:
        raise LightFieldFormatError(f"{name}: invalid model header: {e}") from e

    shape = (header.A_u, header.A_v, header.H, header.W)
    payload = data[start + length:]
    if len(payload) != int(np.prod(shape)) * 4:
        raise LightFieldFormatError(f"{name}: payload has {len(payload)} bytes, header declares {shape}")
    weights = np.frombuffer(payload, dtype="<f4").reshape(shape)
    return CodedModel(
        weights=weights,
        scheme=header.scheme,
        normalize=header.normalize,
        seed=header.seed,
        tile=header.tile,
        shift_per_view=header.shift_per_view,
        generator_version=header.generator_version,
    )


def save_model(model: CodedModel, path: PathLike) -> Path:
    return atomic_write_bytes(path, encode_model(model))


def load_model(path: PathLike) -> CodedModel:
    return decode_model(read_bytes(path), str(path))
