"""
Backward warping of the centerview through a disparity field

View ``q`` is synthesized as ``L(x, q) = C(x + q * D(x, q))``: the center image ``C``
is sampled at ``(y + q_u * D, x + q_v * D)`` with the clamp-to-edge bilinear sampler
of ``lf_core.sampling``. Positive disparity moves the sampling position in the
``+q`` direction, the same convention ``lf_core.shear`` uses for its shear amount.
"""

from typing import Tuple

import numpy as np

from lf_core.errors import LightFieldShapeError
from lf_core.light_field import AngularOffset, LightField, OffsetLike, as_image
from lf_core.sampling import pixel_grid, sample_bilinear, sample_bilinear_with_grad, scatter_bilinear

from .disparity import DisparityField


def _check_map(disp: np.ndarray, image: np.ndarray, what: str = "disparity map") -> np.ndarray:
    disp = np.asarray(disp, dtype=np.float64)
    if disp.shape != image.shape[:2]:
        raise LightFieldShapeError(f"{what} shape {disp.shape} does not match image {image.shape[:2]}")
    return disp


def _restore(image: np.ndarray, ndim: int) -> np.ndarray:
    return image[..., 0] if ndim == 2 else image


def warp_view(center: np.ndarray, disp: np.ndarray, q: OffsetLike) -> np.ndarray:
    """Synthesize view ``q`` from ``center`` and that view's disparity map"""
    ndim = np.ndim(center)
    image = as_image(center)
    disp = _check_map(disp, image)
    q_u, q_v = int(q[0]), int(q[1])
    if q_u == 0 and q_v == 0:
        return _restore(image.copy(), ndim)

    ys, xs = pixel_grid(*image.shape[:2])
    out = sample_bilinear(image[np.newaxis], (ys + q_u * disp)[np.newaxis], (xs + q_v * disp)[np.newaxis])
    return _restore(out[0], ndim)


def warp_view_grad(center: np.ndarray, disp: np.ndarray, q: OffsetLike, upstream: np.ndarray) -> np.ndarray:
    """``d(sum(upstream * warp_view(center, disp, q))) / d disp``, per pixel"""
    image = as_image(center)
    disp = _check_map(disp, image)
    upstream = as_image(upstream)
    if upstream.shape != image.shape:
        raise LightFieldShapeError(f"upstream shape {upstream.shape} does not match image {image.shape}")
    q_u, q_v = int(q[0]), int(q[1])
    if q_u == 0 and q_v == 0:
        return np.zeros(disp.shape)

    ys, xs = pixel_grid(*image.shape[:2])
    _, d_y, d_x = sample_bilinear_with_grad(
        image[np.newaxis], (ys + q_u * disp)[np.newaxis], (xs + q_v * disp)[np.newaxis]
    )
    directional = q_u * d_y[0] + q_v * d_x[0]
    return np.sum(upstream * directional, axis=-1)


def _view_coordinates(dfield: DisparityField) -> Tuple[np.ndarray, np.ndarray]:
    a_u, a_v = dfield.angular_shape
    height, width = dfield.spatial_shape
    q_u, q_v = dfield.offset_grid()
    ys, xs = pixel_grid(height, width)
    values = dfield.values.reshape(a_u * a_v, height, width)
    sample_y = ys[np.newaxis] + q_u.reshape(-1, 1, 1) * values
    sample_x = xs[np.newaxis] + q_v.reshape(-1, 1, 1) * values
    return sample_y, sample_x


def render_views(center: np.ndarray, dfield: DisparityField, with_jacobian: bool = False):
    """Raw ``(A_u, A_v, H, W, C)`` rendering of every view.

    With ``with_jacobian`` also returns the derivative of each rendered sample with
    respect to its own disparity value, ``q_u * dC/dy + q_v * dC/dx``.
    """
    image = as_image(center)
    if image.shape[:2] != dfield.spatial_shape:
        raise LightFieldShapeError(
            f"center image {image.shape[:2]} does not match disparity field {dfield.spatial_shape}"
        )
    a_u, a_v = dfield.angular_shape
    views = a_u * a_v
    sample_y, sample_x = _view_coordinates(dfield)
    stack = np.broadcast_to(image, (views,) + image.shape)
    out_shape = (a_u, a_v) + image.shape
    center_index = np.ravel_multi_index(((a_u - 1) // 2, (a_v - 1) // 2), (a_u, a_v))

    if not with_jacobian:
        rendered = sample_bilinear(stack, sample_y, sample_x)
        rendered[center_index] = image
        return rendered.reshape(out_shape)

    rendered, d_y, d_x = sample_bilinear_with_grad(stack, sample_y, sample_x)
    rendered[center_index] = image
    q_u, q_v = dfield.offset_grid()
    jacobian = q_u.reshape(-1, 1, 1, 1) * d_y + q_v.reshape(-1, 1, 1, 1) * d_x
    return rendered.reshape(out_shape), jacobian.reshape(out_shape)


def render_lf(center: np.ndarray, dfield: DisparityField) -> LightField:
    """Full light field whose view ``q`` is ``warp_view(center, D(., q), q)``"""
    return LightField(render_views(center, dfield))


def _consistency_coordinates(dfield: DisparityField, v: OffsetLike, q: OffsetLike):
    target = AngularOffset(int(v[0]) + int(q[0]), int(v[1]) + int(q[1]))
    source_map = dfield.map_at(v)
    target_map = dfield.map_at(target)
    ys, xs = pixel_grid(*dfield.spatial_shape)
    sample_y = ys - int(q[0]) * source_map
    sample_x = xs - int(q[1]) * source_map
    return target_map, sample_y, sample_x


def warp_consistency_sample(dfield: DisparityField, v: OffsetLike, q: OffsetLike) -> np.ndarray:
    """``D(x - q * D(x, v), v + q)`` sampled bilinearly"""
    target_map, sample_y, sample_x = _consistency_coordinates(dfield, v, q)
    return sample_bilinear(target_map[np.newaxis], sample_y[np.newaxis], sample_x[np.newaxis])[0]


def warp_consistency_grad(dfield: DisparityField, v: OffsetLike, q: OffsetLike, upstream: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Gradients of ``sum(upstream * warp_consistency_sample(dfield, v, q))``.

    Returns the derivative with respect to the map at ``v`` (through the sampling
    position) and with respect to the map at ``v + q`` (through the sampled values).
    """
    target_map, sample_y, sample_x = _consistency_coordinates(dfield, v, q)
    upstream = np.asarray(upstream, dtype=np.float64)
    if upstream.shape != target_map.shape:
        raise LightFieldShapeError(f"upstream shape {upstream.shape} does not match map {target_map.shape}")
    _, d_y, d_x = sample_bilinear_with_grad(target_map[np.newaxis], sample_y[np.newaxis], sample_x[np.newaxis])
    grad_source = -upstream * (int(q[0]) * d_y[0] + int(q[1]) * d_x[0])
    grad_target = scatter_bilinear(upstream[np.newaxis], sample_y[np.newaxis], sample_x[np.newaxis], (1,) + target_map.shape)[0]
    return grad_source, grad_target
