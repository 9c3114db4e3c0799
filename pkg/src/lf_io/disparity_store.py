"""
Disparity directories: one little-endian float32 PFM per view plus manifest.json

Values are stored as float32; a field whose values are float32-representable
roundtrips bit-exactly.
"""

import logging
from pathlib import Path

import numpy as np

from lf_core.errors import LightFieldError, LightFieldFormatError, LightFieldIOError
from lf_warp.disparity import DisparityField

from .atomic import PathLike
from .manifest import DisparityManifest, read_manifest, write_manifest
from .pfm import read_pfm, write_pfm

logger = logging.getLogger(__name__)


def save_disparity(dfield: DisparityField, directory: PathLike) -> Path:
    directory = Path(directory)
    a_u, a_v = dfield.angular_shape
    height, width = dfield.spatial_shape
    manifest = DisparityManifest(A_u=a_u, A_v=a_v, H=height, W=width, d_max=dfield.d_max)
    for i in range(a_u):
        for j in range(a_v):
            write_pfm(directory / manifest.file_name(i, j), dfield.values[i, j])
    write_manifest(directory, manifest)
    logger.info(f"💾 Saved {dfield!r} to {directory}")
    return directory


def load_disparity(directory: PathLike) -> DisparityField:
    directory = Path(directory)
    if not directory.is_dir():
        raise LightFieldIOError(f"disparity directory not found: {directory}")
    manifest = read_manifest(directory, DisparityManifest)

    values = np.empty((manifest.A_u, manifest.A_v, manifest.H, manifest.W))
    for i in range(manifest.A_u):
        for j in range(manifest.A_v):
            path = directory / manifest.file_name(i, j)
            if not path.is_file():
                raise LightFieldIOError(f"{directory}: missing disparity file {path.name} (index ({i}, {j}))")
            view = read_pfm(path)
            if view.shape != values.shape[2:]:
                raise LightFieldFormatError(f"{path}: map has shape {view.shape}, manifest declares {values.shape[2:]}")
            values[i, j] = view

    try:
        return DisparityField(values, manifest.d_max)
    except LightFieldError as e:
        raise LightFieldFormatError(f"{directory}: {e}") from e
