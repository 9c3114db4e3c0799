"""
Loss terms of the disparity objective

All ℓ1 terms use the Charbonnier penalty ``sqrt(r² + ε²) - ε``. Normalizations:

* ``loss_rec``: mean over every light-field sample
* ``loss_measurement``: mean over every coded-image sample, summed over measurements
* ``loss_dc``: sum over valid ``(v, q)`` pairs and pixels, divided by ``pairs * H * W``
* ``loss_tv``: per view, forward differences along y and x summed and divided by ``H * W``;
  then the mean over views
"""

from typing import Optional, Sequence, Tuple, Union

import numpy as np

from lf_core.errors import CodedModelError, LightFieldShapeError
from lf_core.light_field import LightField, OffsetLike, as_image
from lf_core.sampling import pixel_grid, sample_bilinear_with_grad, scatter_bilinear
from lf_sensing.models import CodedModel
from lf_sensing.simulate import CodedImage, simulate_raw
from lf_warp.disparity import DisparityField
from lf_warp.warp import render_views

from .config import UNIT_OFFSETS

DEFAULT_EPS = 1e-3

ArrayOrField = Union[np.ndarray, LightField]


def charbonnier(r: np.ndarray, eps: float = DEFAULT_EPS) -> np.ndarray:
    return np.sqrt(r * r + eps * eps) - eps


def charbonnier_grad(r: np.ndarray, eps: float = DEFAULT_EPS) -> np.ndarray:
    return r / np.sqrt(r * r + eps * eps)


def _raw(lf: ArrayOrField) -> np.ndarray:
    return lf.data if isinstance(lf, LightField) else np.asarray(lf, dtype=np.float64)


def loss_rec(rendered: ArrayOrField, reference: ArrayOrField, eps: float = DEFAULT_EPS) -> float:
    """Mean Charbonnier distance between two light fields"""
    a, b = _raw(rendered), _raw(reference)
    if a.shape != b.shape:
        raise LightFieldShapeError(f"light fields differ in extents: {a.shape} vs {b.shape}")
    return float(np.mean(charbonnier(a - b, eps)))


def loss_rec_and_grad(rendered: np.ndarray, reference: np.ndarray, eps: float = DEFAULT_EPS) -> Tuple[float, np.ndarray]:
    residual = rendered - reference
    value = float(np.mean(charbonnier(residual, eps)))
    return value, charbonnier_grad(residual, eps) / residual.size


def _check_measurements(models: Sequence[CodedModel], observed: Sequence[CodedImage]) -> None:
    if not models:
        raise CodedModelError("at least one measurement is required")
    if len(models) != len(observed):
        raise CodedModelError(f"got {len(models)} models for {len(observed)} coded images")


def measurement_loss_and_grad(
    views: np.ndarray,
    models: Sequence[CodedModel],
    observed: Sequence[CodedImage],
    eps: float = DEFAULT_EPS,
    need_grad: bool = True,
) -> Tuple[float, Optional[np.ndarray]]:
    """Measurement residual of raw rendered views and its derivative with respect to them"""
    _check_measurements(models, observed)
    a_u, a_v, height, width, _ = views.shape
    total = 0.0
    grad = np.zeros_like(views) if need_grad else None
    for model, coded in zip(models, observed):
        target = as_image(coded.data)
        if target.shape != views.shape[2:]:
            raise LightFieldShapeError(f"coded image {target.shape} does not match rendered views {views.shape[2:]}")
        residual = simulate_raw(views, model) - target
        total += float(np.mean(charbonnier(residual, eps)))
        if not need_grad:
            continue

        upstream = charbonnier_grad(residual, eps) / residual.size
        weights = model.weights_for(height, width)
        if model.normalize:
            upstream = upstream / model.weight_sum(height, width)[..., np.newaxis]
        grad += weights[..., np.newaxis] * upstream[np.newaxis, np.newaxis]
    return total, grad


def loss_measurement(
    center: np.ndarray,
    dfield: DisparityField,
    models: Sequence[CodedModel],
    observed: Sequence[CodedImage],
    eps: float = DEFAULT_EPS,
) -> float:
    """Charbonnier residual between simulate(render_lf(center, dfield), model_k) and observation k, summed over k"""
    _check_measurements(models, observed)
    value, _ = measurement_loss_and_grad(render_views(center, dfield), models, observed, eps, need_grad=False)
    return value


def valid_pairs(angular_shape: Tuple[int, int], q: Tuple[int, int]) -> Tuple[np.ndarray, np.ndarray]:
    """Flat indices of source views ``v`` with ``v + q`` in range, and of their targets"""
    a_u, a_v = angular_shape
    sources, targets = [], []
    for i in range(a_u):
        for j in range(a_v):
            ti, tj = i + q[0], j + q[1]
            if 0 <= ti < a_u and 0 <= tj < a_v:
                sources.append(i * a_v + j)
                targets.append(ti * a_v + tj)
    return np.array(sources, dtype=np.intp), np.array(targets, dtype=np.intp)


def dc_loss_and_grad(
    values: np.ndarray,
    q_set: Sequence[OffsetLike],
    eps: float = DEFAULT_EPS,
    need_grad: bool = True,
) -> Tuple[float, Optional[np.ndarray]]:
    """Disparity consistency on raw ``(A_u, A_v, H, W)`` values, batched per offset"""
    a_u, a_v, height, width = values.shape
    flat = values.reshape(a_u * a_v, height, width)
    ys, xs = pixel_grid(height, width)
    total = 0.0
    pairs = 0
    grad = np.zeros_like(flat) if need_grad else None
    pending = []

    for q in q_set:
        q = (int(q[0]), int(q[1]))
        sources, targets = valid_pairs((a_u, a_v), q)
        if sources.size == 0:
            continue
        source_maps = flat[sources]
        sample_y = ys[np.newaxis] - q[0] * source_maps
        sample_x = xs[np.newaxis] - q[1] * source_maps
        sampled, d_y, d_x = sample_bilinear_with_grad(flat[targets], sample_y, sample_x)
        residual = source_maps - sampled
        total += float(np.sum(charbonnier(residual, eps)))
        pairs += sources.size
        if need_grad:
            pending.append((sources, targets, residual, d_y, d_x, sample_y, sample_x, q))

    if pairs == 0:
        return 0.0, grad.reshape(values.shape) if need_grad else None

    scale = 1.0 / (pairs * height * width)
    if need_grad:
        for sources, targets, residual, d_y, d_x, sample_y, sample_x, q in pending:
            upstream = charbonnier_grad(residual, eps) * scale
            moved = upstream * (1.0 + q[0] * d_y + q[1] * d_x)
            grad[sources] += moved
            spread = scatter_bilinear(upstream, sample_y, sample_x, (sources.size, height, width))
            grad[targets] -= spread
        grad = grad.reshape(values.shape)
    return total * scale, grad


def loss_dc(dfield: DisparityField, q_set: Optional[Sequence[OffsetLike]] = None, eps: float = DEFAULT_EPS) -> float:
    """Mean Charbonnier of ``D(x, v) - D(x - q D(x, v), v + q)`` over valid pairs"""
    q_set = list(UNIT_OFFSETS) if q_set is None else list(q_set)
    if not q_set:
        raise ValueError("q_set must not be empty")
    value, _ = dc_loss_and_grad(dfield.values, q_set, eps, need_grad=False)
    return value


def tv_loss_and_grad(values: np.ndarray, eps: float = DEFAULT_EPS, need_grad: bool = True) -> Tuple[float, Optional[np.ndarray]]:
    a_u, a_v, height, width = values.shape
    scale = 1.0 / (a_u * a_v * height * width)
    diff_y = values[:, :, 1:, :] - values[:, :, :-1, :]
    diff_x = values[:, :, :, 1:] - values[:, :, :, :-1]
    value = (np.sum(charbonnier(diff_y, eps)) + np.sum(charbonnier(diff_x, eps))) * scale
    if not need_grad:
        return float(value), None

    grad = np.zeros_like(values)
    g_y = charbonnier_grad(diff_y, eps) * scale
    g_x = charbonnier_grad(diff_x, eps) * scale
    grad[:, :, 1:, :] += g_y
    grad[:, :, :-1, :] -= g_y
    grad[:, :, :, 1:] += g_x
    grad[:, :, :, :-1] -= g_x
    return float(value), grad


def loss_tv(dfield: DisparityField, eps: float = DEFAULT_EPS) -> float:
    """Anisotropic total variation of every view's map, mean over views"""
    value, _ = tv_loss_and_grad(dfield.values, eps, need_grad=False)
    return value

