"""
Procedural synthetic scenes with known disparity

Every scene is a center texture plus a disparity field; the light field is obtained
by backward warping, so the disparity is exact by construction.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from lf_core.errors import LightFieldValueError
from lf_core.light_field import LightField, shear
from lf_core.sampling import pixel_grid, sample_bilinear

from .disparity import DisparityField
from .warp import render_lf

TEXTURE_LOW = 0.1
TEXTURE_HIGH = 0.9


@dataclass(frozen=True)
class SyntheticScene:
    name: str
    center: np.ndarray
    lf: LightField
    dfield: DisparityField


def _rescale(values: np.ndarray, low: float = TEXTURE_LOW, high: float = TEXTURE_HIGH) -> np.ndarray:
    span = values.max() - values.min()
    if span == 0:
        return np.full(values.shape, 0.5 * (low + high))
    return low + (high - low) * (values - values.min()) / span


def smooth_texture(height: int, width: int, seed: int = 0, sigma: float = 1.5, channels: int = 1) -> np.ndarray:
    """Gaussian-smoothed uniform noise rescaled to [0.1, 0.9], shape ``(H, W, C)``"""
    rng = np.random.default_rng(seed)
    noise = rng.random((height, width, channels))
    smoothed = ndimage.gaussian_filter(noise, sigma=(sigma, sigma, 0), mode="reflect")
    return _rescale(smoothed)


def multiscale_texture(height: int, width: int, seed: int = 0, sigmas: Sequence[float] = (1.0, 2.0, 4.0), channels: int = 1) -> np.ndarray:
    """Sum of smoothed noise layers, coarse layers weighted higher"""
    rng = np.random.default_rng(seed)
    total = np.zeros((height, width, channels))
    for sigma in sigmas:
        layer = ndimage.gaussian_filter(rng.random((height, width, channels)), sigma=(sigma, sigma, 0), mode="reflect")
        total += sigma * (layer - layer.mean())
    return _rescale(total)


def ramp_texture(height: int, width: int, axis: str = "x", channels: int = 1) -> np.ndarray:
    """Linear ramp from 0 to 1 along ``axis``"""
    ys, xs = pixel_grid(height, width)
    ramp = xs / (width - 1) if axis == "x" else ys / (height - 1)
    return np.repeat(ramp[..., np.newaxis], channels, axis=-1)


def plane_scene(center: np.ndarray, d: float, angular_shape: Tuple[int, int] = (7, 7), name: Optional[str] = None) -> SyntheticScene:
    """Fronto-parallel plane at constant disparity ``d``"""
    center = np.asarray(center, dtype=np.float64)
    dfield = DisparityField.constant(angular_shape, center.shape[:2], d)
    return SyntheticScene(
        name=name or f"plane_{d:+g}",
        center=center,
        lf=render_lf(center, dfield),
        dfield=dfield,
    )


def disk_mask(height: int, width: int, radius_fraction: float = 0.3) -> np.ndarray:
    ys, xs = pixel_grid(height, width)
    cy, cx = (height - 1) / 2.0, (width - 1) / 2.0
    radius = radius_fraction * min(height, width)
    return (ys - cy) ** 2 + (xs - cx) ** 2 <= radius ** 2


def two_plane_scene(
    center: np.ndarray,
    d_front: float,
    d_back: float,
    front_mask: Optional[np.ndarray] = None,
    angular_shape: Tuple[int, int] = (7, 7),
    name: Optional[str] = None,
) -> SyntheticScene:
    """Front region at ``d_front`` over a background at ``d_back``.

    ``front_mask`` marks the front region in center-view coordinates. Pixel ``x`` of
    view ``q`` sees the front surface when ``x + q * d_front`` lands inside the mask.
    """
    center = np.asarray(center, dtype=np.float64)
    height, width = center.shape[:2]
    if front_mask is None:
        front_mask = disk_mask(height, width)
    front_mask = np.asarray(front_mask, dtype=bool)

    a_u, a_v = angular_shape
    r_u, r_v = (a_u - 1) // 2, (a_v - 1) // 2
    ys, xs = pixel_grid(height, width)
    values = np.empty((a_u, a_v, height, width))
    for i in range(a_u):
        for j in range(a_v):
            q_u, q_v = i - r_u, j - r_v
            hit_y = np.clip(np.rint(ys + q_u * d_front), 0, height - 1).astype(np.intp)
            hit_x = np.clip(np.rint(xs + q_v * d_front), 0, width - 1).astype(np.intp)
            values[i, j] = np.where(front_mask[hit_y, hit_x], d_front, d_back)

    dfield = DisparityField(values)
    return SyntheticScene(
        name=name or f"two_plane_{d_front:+g}_{d_back:+g}",
        center=center,
        lf=render_lf(center, dfield),
        dfield=dfield,
    )


def refocus_scene(scene: SyntheticScene, s: float) -> SyntheticScene:
    """Move the focal plane: shear the light field by ``s``; every disparity gains ``+s``"""
    s = float(s)
    if not np.isfinite(s):
        raise LightFieldValueError(f"shear amount must be finite, got {s}")
    dfield = scene.dfield
    a_u, a_v = dfield.angular_shape
    height, width = dfield.spatial_shape
    q_u, q_v = dfield.offset_grid()
    ys, xs = pixel_grid(height, width)
    stack = dfield.values.reshape(a_u * a_v, height, width)
    moved = sample_bilinear(
        stack,
        ys[np.newaxis] + s * q_u.reshape(-1, 1, 1),
        xs[np.newaxis] + s * q_v.reshape(-1, 1, 1),
    )
    return SyntheticScene(
        name=f"{scene.name}_refocus_{s:+g}",
        center=scene.center,
        lf=shear(scene.lf, s),
        dfield=DisparityField.projected(moved.reshape(dfield.values.shape) + s, dfield.d_max),
    )


def scene_suite(
    count: int = 10,
    spatial_shape: Tuple[int, int] = (48, 48),
    angular_shape: Tuple[int, int] = (7, 7),
    seed: int = 0,
    disparities: Sequence[float] = (-2.0, -1.0, 1.0, 2.0),
    back_ratio: float = -0.5,
) -> List[SyntheticScene]:
    """Deterministic mix of plane and two-plane scenes.

    Two-plane scenes put their background at ``back_ratio * d``; a positive ratio keeps
    both surfaces on the same side of the focal plane.
    """
    height, width = spatial_shape
    scenes = []
    for k in range(count):
        texture_seed = seed + k
        if k % 2 == 0:
            center = smooth_texture(height, width, texture_seed)
        else:
            center = multiscale_texture(height, width, texture_seed)
        d = disparities[k % len(disparities)]
        if k % 3 == 2:
            scenes.append(two_plane_scene(center, d, back_ratio * d, angular_shape=angular_shape, name=f"suite_{k:02d}_two_plane"))
        else:
            scenes.append(plane_scene(center, d, angular_shape, name=f"suite_{k:02d}_plane"))
    return scenes
