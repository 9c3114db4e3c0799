"""
Per-instance disparity estimation

Coarse-to-fine projected descent with adaptive per-coordinate moment scaling and an
Armijo backtracking line search. Each level stops once its loss has stalled.

With ``multi_start_signs`` the whole pyramid is solved twice, from ``+init_magnitude``
and from ``-init_magnitude``. The lower-loss branch is the base; wherever the other
branch explains the data better over a ``sign_patch`` window, its values are taken
instead, single views are then switched where that alone fits better, and the merged
field is refined at full resolution. Ties go to the positive
branch. Mirror-symmetric measurement sets (every model unchanged by reflecting the
views through the center) make the negative branch the exact reflection of the
positive one, so only the positive branch is solved for them.
"""

import logging
import time
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy import ndimage

from lf_core.errors import SolverDivergenceError
from lf_core.light_field import LightField, as_image
from lf_sensing.models import CodedModel
from lf_sensing.simulate import CodedImage
from lf_warp.disparity import DisparityField

from .config import SolverConfig, SolverMode
from .objective import LossBreakdown, Measurements, Objective, References, check_references
from .pyramid import downsample_references, level_shapes, resize_image, upsample_disparity

logger = logging.getLogger(__name__)

BETA1 = 0.9
BETA2 = 0.999
MOMENT_EPS = 1e-8

POSITIVE = "positive"
NEGATIVE = "negative"
MERGED = "merged"
MERGE_SWEEPS = 2


class LevelTrace(BaseModel):
    level: int
    shape: Tuple[int, int]
    tied_views: bool
    losses: List[float]
    iterations: int
    branch: str = POSITIVE


class SolveReport(BaseModel):
    """Outcome of one solve.

    ``sign_branch`` is the lower-loss branch the result is based on; ``switched_fraction``
    is the share of ``(view, pixel)`` values that came from the other branch.
    """
    mode: SolverMode
    levels: List[LevelTrace]
    final: LossBreakdown
    iterations: int
    wall_clock_s: Optional[float] = None
    sign_branch: str
    branch_losses: Dict[str, float] = Field(default_factory=dict)
    switched_fraction: float = 0.0
    config: SolverConfig


class _LevelResult:
    def __init__(self, values: np.ndarray, trace: LevelTrace, loss: float):
        self.values = values
        self.trace = trace
        self.loss = loss


def _check_finite(loss: float, level: int, iteration: int) -> None:
    if not np.isfinite(loss):
        raise SolverDivergenceError(
            f"non-finite loss {loss} at level {level}, iteration {iteration}",
            level=level,
            iteration=iteration,
        )


def _converged(losses: List[float], config: SolverConfig) -> bool:
    window = config.converge_window
    if len(losses) <= window:
        return False
    before, now = losses[-window - 1], losses[-1]
    return before - now <= config.converge_rtol * abs(before)


def _descend(
    objective: Objective,
    values: np.ndarray,
    level: int,
    tied: bool,
    branch: str = POSITIVE,
) -> _LevelResult:
    """Run one pyramid level; returns the accepted iterate and its loss trace"""
    config = objective.config
    views = objective.angular_shape[0] * objective.angular_shape[1]

    def expand(params: np.ndarray) -> np.ndarray:
        if tied:
            return np.broadcast_to(params, objective.angular_shape + params.shape).copy()
        return params

    def evaluate(params: np.ndarray, need_grad: bool):
        breakdown, grad = objective.evaluate(expand(params), need_grad)
        if grad is not None and tied:
            grad = grad.reshape((views,) + params.shape).sum(axis=0)
        return breakdown.total, grad

    params = values.mean(axis=(0, 1)) if tied else values.copy()
    loss, grad = evaluate(params, True)
    _check_finite(loss, level, 0)
    losses = [loss]
    first = np.zeros_like(params)
    second = np.zeros_like(params)
    iterations = 0
    # the line search starts from twice the last accepted step
    step_start = config.step_size

    for t in range(1, config.iters_per_level + 1):
        first = BETA1 * first + (1.0 - BETA1) * grad
        second = BETA2 * second + (1.0 - BETA2) * grad * grad
        scale = np.sqrt(second / (1.0 - BETA2 ** t)) + MOMENT_EPS
        candidates = [-(first / (1.0 - BETA1 ** t)) / scale, -grad / scale]

        accepted = None
        for direction in candidates:
            if np.sum(direction * grad) >= 0:
                continue
            step = step_start
            for _ in range(config.max_backtracks + 1):
                trial = np.clip(params + step * direction, -config.d_max, config.d_max)
                trial_loss, _ = evaluate(trial, False)
                _check_finite(trial_loss, level, t)
                decrease = config.armijo * np.sum(grad * (trial - params))
                if trial_loss <= loss and trial_loss <= loss + decrease:
                    accepted = (trial, trial_loss, step)
                    break
                step *= 0.5
            if accepted is not None:
                break

        if accepted is None:
            logger.debug(f"🛑 Level {level} ({branch}): no descent step after {t - 1} iterations")
            break
        params, loss, step = accepted
        step_start = min(config.step_size, 2.0 * step)
        _, grad = evaluate(params, True)
        losses.append(loss)
        iterations = t
        if _converged(losses, config):
            logger.debug(f"🛑 Level {level} ({branch}): converged after {t} iterations")
            break

    trace = LevelTrace(
        level=level,
        shape=tuple(values.shape[2:]),
        tied_views=tied,
        losses=losses,
        iterations=iterations,
        branch=branch,
    )
    return _LevelResult(expand(params), trace, loss)


def _coarsest_start(objective: Objective, shape: Tuple[int, int], sign: float) -> np.ndarray:
    magnitude = min(objective.config.init_magnitude, objective.config.d_max)
    return np.full(objective.angular_shape + tuple(shape), sign * magnitude)


def _solve_branch(
    objectives: List[Objective],
    shapes: List[Tuple[int, int]],
    sign: float,
) -> List[_LevelResult]:
    """Full coarse-to-fine pass from a constant start of the given sign"""
    config = objectives[0].config
    name = POSITIVE if sign > 0 else NEGATIVE
    coarsest = len(shapes) - 1
    results = []
    values = _coarsest_start(objectives[coarsest], shapes[coarsest], sign)
    if config.tie_views_at_coarsest:
        tied = _descend(objectives[coarsest], values, coarsest, tied=True, branch=name)
        results.append(tied)
        values = tied.values
    result = _descend(objectives[coarsest], values, coarsest, tied=False, branch=name)
    results.append(result)
    logger.info(f"  📉 {name} branch, level {coarsest} {shapes[coarsest][0]}x{shapes[coarsest][1]}: loss {result.loss:.6g}")

    values = result.values
    for level in range(coarsest - 1, -1, -1):
        values = np.clip(upsample_disparity(values, shapes[level]), -config.d_max, config.d_max)
        result = _descend(objectives[level], values, level, tied=False, branch=name)
        results.append(result)
        values = result.values
        logger.info(f"  🔍 {name} branch, level {level} {shapes[level][0]}x{shapes[level][1]}: loss {result.loss:.6g}")
    return results


def mirror_symmetric(config: SolverConfig, references: References) -> bool:
    """Whether ``D(x, q) -> -D(x, -q)`` leaves the objective unchanged.

    Holds in measurement mode when every model's weights are unchanged by reflecting
    the views through the center and ``q_set`` is closed under negation.
    """
    if config.mode is not SolverMode.MEASUREMENT or not isinstance(references, Measurements):
        return False
    offsets = {tuple(q) for q in config.q_set}
    if any((-q[0], -q[1]) not in offsets for q in offsets):
        return False
    return all(np.array_equal(model.weights, model.weights[::-1, ::-1]) for model in references.models)


def merge_sign_branches(
    objective: Objective,
    base: np.ndarray,
    other: np.ndarray,
    patch: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Combine two sign branches into the field that best explains the data.

    Pixels first follow whichever branch has the lower data penalty averaged over a
    ``patch`` window. Then, view by view, a value is switched to the other branch
    wherever that alone lowers the pixel's data penalty, which settles the views that
    look past an occlusion edge. Returns the merged values and the ``(A_u, A_v, H, W)``
    mask of values taken from ``other``.
    """
    base_cost = ndimage.uniform_filter(objective.residual_map(base), size=patch, mode="nearest")
    other_cost = ndimage.uniform_filter(objective.residual_map(other), size=patch, mode="nearest")
    take = np.broadcast_to(other_cost < base_cost, base.shape).copy()

    merged = np.where(take, other, base)
    cost = objective.residual_map(merged)
    a_u, a_v = base.shape[:2]
    for _ in range(MERGE_SWEEPS):
        for i in range(a_u):
            for j in range(a_v):
                trial = merged.copy()
                trial[i, j] = np.where(take[i, j], base[i, j], other[i, j])
                trial_cost = objective.residual_map(trial)
                better = trial_cost < cost
                merged[i, j] = np.where(better, trial[i, j], merged[i, j])
                take[i, j] ^= better
                cost = np.where(better, trial_cost, cost)
    return merged, take


def solve_disparity(
    center: np.ndarray,
    observations: Optional[Sequence[CodedImage]] = None,
    models: Optional[Sequence[CodedModel]] = None,
    config: Optional[SolverConfig] = None,
    reference: Optional[LightField] = None,
) -> Tuple[DisparityField, SolveReport]:
    """Estimate the disparity field that best explains the references from ``center``.

    Measurement mode takes ``observations`` and ``models``; supervised mode takes a
    ``reference`` light field.
    """
    config = config or SolverConfig()
    started = time.perf_counter()
    center = as_image(center)

    if config.mode is SolverMode.SUPERVISED:
        references: References = reference
        check_references(config, references)
        angular_shape = reference.angular_shape
    else:
        references = Measurements(list(models or []), list(observations or []))
        check_references(config, references)
        angular_shape = references.models[0].angular_shape

    shapes = level_shapes(center.shape[:2], config.pyramid_levels)
    logger.info(
        f"🔧 Solving {angular_shape[0]}x{angular_shape[1]} views at {center.shape[0]}x{center.shape[1]} px "
        f"({config.mode.value}, {len(shapes)} levels)"
    )

    objectives = []
    for shape in shapes:
        objectives.append(Objective(resize_image(center, shape), config, downsample_references(references, shape), angular_shape))

    signs = [1.0]
    if config.multi_start_signs:
        if mirror_symmetric(config, references):
            logger.info("🪞 Mirror-symmetric measurements: the negative branch is the reflection of the positive one")
        else:
            signs.append(-1.0)

    branch_results: Dict[str, List[_LevelResult]] = {}
    branch_losses: Dict[str, float] = {}
    for sign in signs:
        name = POSITIVE if sign > 0 else NEGATIVE
        branch_results[name] = _solve_branch(objectives, shapes, sign)
        branch_losses[name] = branch_results[name][-1].loss

    chosen = POSITIVE
    if NEGATIVE in branch_losses:
        pos, neg = branch_losses[POSITIVE], branch_losses[NEGATIVE]
        if neg < pos - config.tie_tolerance * max(1.0, abs(pos)):
            chosen = NEGATIVE
    results = [r for name in branch_losses for r in branch_results[name]]
    values = branch_results[chosen][-1].values
    switched = 0.0

    if len(branch_losses) > 1:
        other = NEGATIVE if chosen == POSITIVE else POSITIVE
        merged, take = merge_sign_branches(objectives[0], values, branch_results[other][-1].values, config.sign_patch)
        if take.any():
            refined = _descend(objectives[0], merged, 0, tied=False, branch=MERGED)
            results.append(refined)
            branch_losses[MERGED] = refined.loss
            if refined.loss < branch_losses[chosen]:
                values = refined.values
                switched = float(take.mean())
            logger.info(
                f"  🔀 {take.mean():.1%} of view values from the {other} branch: loss {refined.loss:.6g} "
                f"({'kept' if switched else 'discarded'})"
            )

    dfield = DisparityField.projected(values, config.d_max)
    final, _ = objectives[0].evaluate(dfield.values, need_grad=False)
    report = SolveReport(
        mode=config.mode,
        levels=[r.trace for r in results],
        final=final,
        iterations=sum(r.trace.iterations for r in results),
        wall_clock_s=time.perf_counter() - started,
        sign_branch=chosen,
        branch_losses=branch_losses,
        switched_fraction=switched,
        config=config,
    )
    logger.info(f"✅ Solve finished: loss {final.total:.6g} after {report.iterations} iterations ({chosen} branch)")
    return dfield, report
