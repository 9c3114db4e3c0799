"""
Light-field directories: one 16-bit PNG per sub-aperture view plus manifest.json

Concurrent saves into one directory are undefined; loads are reentrant.
"""

import logging
from pathlib import Path

import numpy as np

from lf_core.errors import LightFieldError, LightFieldFormatError, LightFieldIOError
from lf_core.light_field import LightField

from .atomic import PathLike
from .images import load_png, save_png16
from .manifest import LfManifest, read_manifest, write_manifest

logger = logging.getLogger(__name__)


def save_lf(lf: LightField, directory: PathLike) -> Path:
    directory = Path(directory)
    a_u, a_v = lf.angular_shape
    height, width = lf.spatial_shape
    manifest = LfManifest(A_u=a_u, A_v=a_v, H=height, W=width, channels=lf.channels)
    for i in range(a_u):
        for j in range(a_v):
            save_png16(directory / manifest.view_name(i, j), lf.data[i, j])
    write_manifest(directory, manifest)
    logger.info(f"💾 Saved {lf!r} to {directory}")
    return directory


def load_lf(directory: PathLike) -> LightField:
    directory = Path(directory)
    if not directory.is_dir():
        raise LightFieldIOError(f"light-field directory not found: {directory}")
    manifest = read_manifest(directory, LfManifest)

    missing = [
        f"{manifest.view_name(i, j)} (index ({i}, {j}))"
        for i in range(manifest.A_u)
        for j in range(manifest.A_v)
        if not (directory / manifest.view_name(i, j)).is_file()
    ]
    if missing:
        raise LightFieldIOError(f"{directory}: missing view files: {', '.join(missing)}")

    data = np.empty((manifest.A_u, manifest.A_v, manifest.H, manifest.W, manifest.channels))
    for i in range(manifest.A_u):
        for j in range(manifest.A_v):
            path = directory / manifest.view_name(i, j)
            view = load_png(path)
            if view.shape != data.shape[2:]:
                raise LightFieldFormatError(
                    f"{path}: view has shape {view.shape}, manifest declares {data.shape[2:]}"
                )
            data[i, j] = view

    try:
        lf = LightField(data)
    except LightFieldError as e:
        raise LightFieldFormatError(f"{directory}: {e}") from e
    logger.debug(f"📂 Loaded {lf!r} from {directory}")
    return lf
