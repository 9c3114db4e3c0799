"""
Centerview estimators for the reconstruction pipeline
"""

import logging
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from lf_core.errors import CodedModelError, LightFieldShapeError
from lf_core.light_field import CENTER, LightField, as_image, get_view

from .models import CodedModel
from .simulate import CodedImage

logger = logging.getLogger(__name__)


class OracleCenterView:
    """Ground-truth centerview taken from a known light field"""
    name = "oracle"

    def __init__(self, lf: LightField):
        self.lf = lf

    def estimate(self, coded: Sequence[CodedImage], models: Sequence[CodedModel]) -> np.ndarray:
        return np.array(get_view(self.lf, CENTER))


class GivenFileCenterView:
    """Centerview read from an image file (16-bit PNG or PFM)"""
    name = "given-file"

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)

    def estimate(self, coded: Sequence[CodedImage], models: Sequence[CodedModel]) -> np.ndarray:
        from lf_io.images import load_image

        image = load_image(self.path)
        if coded and image.shape[:2] != coded[0].spatial_shape:
            raise LightFieldShapeError(
                f"centerview {self.path} has extents {image.shape[:2]}, coded image has {coded[0].spatial_shape}"
            )
        return image


class CodeNormalizedCenterView:
    """Coded image divided by its per-pixel weight sum, averaged over shots.

    Exact when every view equals the centerview (zero disparity), approximate otherwise.
    """
    name = "code-normalized-baseline"

    def estimate(self, coded: Sequence[CodedImage], models: Sequence[CodedModel]) -> np.ndarray:
        if not coded or len(coded) != len(models):
            raise CodedModelError(f"need one model per coded image, got {len(coded)} images and {len(models)} models")

        estimates = []
        for image, model in zip(coded, models):
            data = as_image(image.data)
            if image.normalized:
                estimates.append(data)
                continue
            weight_sum = model.weight_sum(*data.shape[:2])
            if np.any(weight_sum <= 0):
                raise CodedModelError("cannot normalize a coded image with zero weight-sum pixels")
            estimates.append(data / weight_sum[..., np.newaxis])

        center = np.clip(np.mean(estimates, axis=0), 0.0, 1.0)
        logger.debug(f"🎯 Code-normalized centerview from {len(estimates)} shot(s)")
        return center
