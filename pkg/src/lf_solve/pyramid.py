"""
Coarse-to-fine pyramid helpers
"""

from typing import List, Tuple

import numpy as np
from skimage.transform import resize

from lf_core.light_field import LightField
from lf_sensing.models import CodedModel
from lf_sensing.simulate import CodedImage

from .objective import Measurements, References

MIN_LEVEL_SIZE = 8


def level_shapes(spatial_shape: Tuple[int, int], levels: int, min_size: int = MIN_LEVEL_SIZE) -> List[Tuple[int, int]]:
    """Spatial shapes from finest to coarsest; each level halves the previous one.

    Levels whose smaller side would drop below ``min_size`` are not built.
    """
    shapes = [tuple(spatial_shape)]
    while len(shapes) < levels:
        height, width = shapes[-1]
        coarser = ((height + 1) // 2, (width + 1) // 2)
        if min(coarser) < min_size:
            break
        shapes.append(coarser)
    return shapes


def resize_image(image: np.ndarray, shape: Tuple[int, int]) -> np.ndarray:
    """Bilinear resize of an ``(H, W, C)`` image; anti-aliased when shrinking"""
    if image.shape[:2] == tuple(shape):
        return np.array(image, dtype=np.float64)
    shrinking = shape[0] < image.shape[0] or shape[1] < image.shape[1]
    return resize(
        image,
        tuple(shape) + image.shape[2:],
        order=1,
        mode="edge",
        anti_aliasing=shrinking,
        preserve_range=True,
    )


def resize_views(views: np.ndarray, shape: Tuple[int, int]) -> np.ndarray:
    """Resize every view of an ``(A_u, A_v, H, W, ...)`` array"""
    a_u, a_v = views.shape[:2]
    out = np.empty((a_u, a_v) + tuple(shape) + views.shape[4:])
    for i in range(a_u):
        for j in range(a_v):
            out[i, j] = resize_image(views[i, j], shape)
    return out


def downsample_model(model: CodedModel, shape: Tuple[int, int]) -> CodedModel:
    """Spatially constant models are resolution independent; mask weights are resized"""
    if model.spatially_constant or model.spatial_shape == tuple(shape):
        return model
    weights = np.clip(resize_views(model.weights, shape), 0.0, 1.0)
    return CodedModel(
        weights=weights,
        scheme=model.scheme,
        normalize=model.normalize,
        seed=model.seed,
        tile=model.tile,
        shift_per_view=model.shift_per_view,
        generator_version=model.generator_version,
    )


def downsample_references(references: References, shape: Tuple[int, int]) -> References:
    if isinstance(references, LightField):
        if references.spatial_shape == tuple(shape):
            return references
        return LightField(np.clip(resize_views(references.data, shape), 0.0, 1.0))

    observed = [
        CodedImage(
            data=np.clip(resize_image(coded.data, shape), 0.0, None if not coded.normalized else 1.0),
            normalized=coded.normalized,
            provenance=coded.provenance,
            provenance_known=coded.provenance_known,
        )
        for coded in references.observed
    ]
    return Measurements([downsample_model(m, shape) for m in references.models], observed)


def upsample_disparity(values: np.ndarray, shape: Tuple[int, int]) -> np.ndarray:
    """Bilinear upsampling with disparities rescaled to the finer pixel units"""
    coarse_h, coarse_w = values.shape[2:]
    scale = 0.5 * (shape[0] / coarse_h + shape[1] / coarse_w)
    return resize_views(values, shape) * scale
