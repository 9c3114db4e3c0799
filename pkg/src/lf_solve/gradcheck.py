"""
Finite-difference verification of analytic gradients
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from lf_core.light_field import LightField, OffsetLike, as_image
from lf_core.sampling import lower_corners, pixel_grid, sample_bilinear
from lf_sensing.simulate import simulate_raw
from lf_warp.warp import render_views

from .losses import valid_pairs
from .objective import Objective

DEFAULT_STEP = 1e-3
DEFAULT_MARGIN = 0.1


@dataclass(frozen=True)
class SampleResult:
    index: Tuple[int, ...]
    analytic: float
    numeric: float

    def relative_error(self, floor: float = 1e-8) -> float:
        scale = max(abs(self.analytic), abs(self.numeric), floor)
        return abs(self.analytic - self.numeric) / scale


@dataclass(frozen=True)
class GradCheckResult:
    samples: List[SampleResult]

    def max_relative_error(self, floor: float = 1e-8) -> float:
        return max((p.relative_error(floor) for p in self.samples), default=0.0)

    def passed(self, rtol: float = 1e-4, floor: float = 1e-8) -> bool:
        return self.max_relative_error(floor) <= rtol


def _distance_to_integer(values: np.ndarray) -> np.ndarray:
    return np.abs(values - np.rint(values))


def sampling_margin(values: np.ndarray, index: Tuple[int, int, int, int], q_set: Sequence[OffsetLike]) -> float:
    """Distance from the nearest integer of every sampling coordinate that depends on ``values[index]``.

    Covers the warp of view ``v`` and the consistency samples taken with ``v`` as the source view.
    """
    a_u, a_v = values.shape[:2]
    i, j, y, x = index
    r_u, r_v = (a_u - 1) // 2, (a_v - 1) // 2
    q_u, q_v = i - r_u, j - r_v
    d = values[index]

    coords = []
    if q_u:
        coords.append(y + q_u * d)
    if q_v:
        coords.append(x + q_v * d)
    for p in q_set:
        if 0 <= i + p[0] < a_u and 0 <= j + p[1] < a_v:
            if p[0]:
                coords.append(y - p[0] * d)
            if p[1]:
                coords.append(x - p[1] * d)
    if not coords:
        return np.inf
    return float(np.min(_distance_to_integer(np.array(coords))))


def finite_difference_check(
    func: Callable[[np.ndarray], Tuple[float, np.ndarray]],
    x: np.ndarray,
    samples: int = 100,
    h: float = DEFAULT_STEP,
    seed: int = 0,
    accept: Optional[Callable[[Tuple[int, ...]], bool]] = None,
    max_draws: int = 100000,
) -> GradCheckResult:
    """Compare ``func``'s analytic gradient with central differences at random indices.

    ``func`` maps an array to ``(value, gradient)``. Indices rejected by ``accept`` are
    skipped, which keeps samples away from kinks of the objective.
    """
    x = np.array(x, dtype=np.float64)
    _, analytic = func(x)
    rng = np.random.default_rng(seed)
    results: List[SampleResult] = []
    seen = set()
    draws = 0
    while len(results) < samples and draws < max_draws and len(seen) < x.size:
        draws += 1
        index = tuple(int(k) for k in np.unravel_index(rng.integers(x.size), x.shape))
        if index in seen:
            continue
        seen.add(index)
        if accept is not None and not accept(index):
            continue
        bumped = x.copy()
        bumped[index] = x[index] + h
        plus, _ = func(bumped)
        bumped[index] = x[index] - h
        minus, _ = func(bumped)
        results.append(SampleResult(index=index, analytic=float(analytic[index]), numeric=(plus - minus) / (2.0 * h)))
    return GradCheckResult(results)


def penalty_margins(objective: Objective, values: np.ndarray) -> np.ndarray:
    """Smallest ``|r|`` over every Charbonnier argument ``r`` that depends on each value.

    Returns an array shaped like ``values``. With a small ``robust_eps`` the penalty
    bends sharply near ``r = 0`` and central differences lose accuracy there, so samples
    are best restricted to indices whose margin is large against ``h``.
    """
    values = np.asarray(values, dtype=np.float64)
    a_u, a_v, height, width = values.shape
    margins = np.full(values.shape, np.inf)

    diff_y = np.abs(np.diff(values, axis=2))
    diff_x = np.abs(np.diff(values, axis=3))
    margins[:, :, 1:, :] = np.minimum(margins[:, :, 1:, :], diff_y)
    margins[:, :, :-1, :] = np.minimum(margins[:, :, :-1, :], diff_y)
    margins[:, :, :, 1:] = np.minimum(margins[:, :, :, 1:], diff_x)
    margins[:, :, :, :-1] = np.minimum(margins[:, :, :, :-1], diff_x)

    views = render_views(objective.center, objective.field(values))
    if isinstance(objective.references, LightField):
        data = np.abs(views - objective.references.data).min(axis=-1)
    else:
        coded_margin = np.full((height, width), np.inf)
        for model, coded in zip(objective.references.models, objective.references.observed):
            residual = np.abs(simulate_raw(views, model) - as_image(coded.data)).min(axis=-1)
            coded_margin = np.minimum(coded_margin, residual)
        data = np.broadcast_to(coded_margin, values.shape).copy()
    # the center view is the input image and does not move with its disparity
    data[(a_u - 1) // 2, (a_v - 1) // 2] = np.inf
    margins = np.minimum(margins, data)

    flat_values = values.reshape(a_u * a_v, height, width)
    flat = margins.reshape(a_u * a_v, height, width)
    ys, xs = pixel_grid(height, width)
    for q in objective.config.q_set:
        q = (int(q[0]), int(q[1]))
        sources, targets = valid_pairs((a_u, a_v), q)
        if sources.size == 0:
            continue
        source_maps = flat_values[sources]
        sample_y = ys[np.newaxis] - q[0] * source_maps
        sample_x = xs[np.newaxis] - q[1] * source_maps
        residual = np.abs(source_maps - sample_bilinear(flat_values[targets], sample_y, sample_x))
        flat[sources] = np.minimum(flat[sources], residual)

        y0, x0 = lower_corners(sample_y, sample_x, height, width)
        owner = np.broadcast_to(targets.reshape(-1, 1, 1), y0.shape)
        for dy in (0, 1):
            for dx in (0, 1):
                np.minimum.at(flat, (owner, y0 + dy, x0 + dx), residual)
    return flat.reshape(values.shape)
