"""
Composite objective: data term + λ_dc * consistency + λ_tv * total variation
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel

from lf_core.errors import CodedModelError, LightFieldShapeError, SolverConfigError
from lf_core.light_field import LightField, as_image
from lf_sensing.models import CodedModel
from lf_sensing.simulate import CodedImage, simulate_raw
from lf_warp.disparity import DisparityField, WarpGradient
from lf_warp.warp import render_views

from .config import SolverConfig, SolverMode
from .losses import charbonnier, dc_loss_and_grad, loss_rec_and_grad, measurement_loss_and_grad, tv_loss_and_grad


@dataclass(frozen=True)
class Measurements:
    """Coded observations paired with the models that produced them"""
    models: Sequence[CodedModel]
    observed: Sequence[CodedImage]

    def __post_init__(self):
        models, observed = tuple(self.models), tuple(self.observed)
        if not models:
            raise CodedModelError("at least one measurement is required")
        if len(models) != len(observed):
            raise CodedModelError(f"got {len(models)} models for {len(observed)} coded images")
        object.__setattr__(self, "models", tuple(models))
        object.__setattr__(self, "observed", tuple(observed))

    @property
    def spatial_shape(self) -> Tuple[int, int]:
        return self.observed[0].spatial_shape


References = Union[LightField, Measurements]


class LossBreakdown(BaseModel):
    data: float
    dc: float
    tv: float
    total: float


def check_references(config: SolverConfig, references: References) -> None:
    if config.mode is SolverMode.SUPERVISED and not isinstance(references, LightField):
        raise SolverConfigError("supervised mode needs a reference LightField")
    if config.mode is SolverMode.MEASUREMENT and not isinstance(references, Measurements):
        raise SolverConfigError("measurement mode needs coded measurements")


class Objective:
    """Loss and gradient over raw ``(A_u, A_v, H, W)`` disparity values"""

    def __init__(self, center: np.ndarray, config: SolverConfig, references: References, angular_shape: Tuple[int, int]):
        check_references(config, references)
        self.center = as_image(center)
        self.config = config
        self.references = references
        self.angular_shape = tuple(angular_shape)

        if isinstance(references, LightField):
            expected = self.angular_shape + self.center.shape
            if references.data.shape != expected:
                raise LightFieldShapeError(f"reference light field {references.data.shape} does not match {expected}")
        else:
            for coded in references.observed:
                if coded.data.shape != self.center.shape:
                    raise LightFieldShapeError(
                        f"coded image {coded.data.shape} does not match centerview {self.center.shape}"
                    )

    def field(self, values: np.ndarray) -> DisparityField:
        return DisparityField(values, self.config.d_max)

    def evaluate(self, values: np.ndarray, need_grad: bool = True) -> Tuple[LossBreakdown, Optional[np.ndarray]]:
        config = self.config
        eps = config.robust_eps
        dfield = self.field(values)

        if need_grad:
            views, jacobian = render_views(self.center, dfield, with_jacobian=True)
        else:
            views, jacobian = render_views(self.center, dfield), None

        if isinstance(self.references, LightField):
            data, d_views = loss_rec_and_grad(views, self.references.data, eps)
            if not need_grad:
                d_views = None
        else:
            data, d_views = measurement_loss_and_grad(
                views, self.references.models, self.references.observed, eps, need_grad
            )

        dc, g_dc = dc_loss_and_grad(dfield.values, config.q_set, eps, need_grad)
        tv, g_tv = tv_loss_and_grad(dfield.values, eps, need_grad)
        total = data + config.lambda_dc * dc + config.lambda_tv * tv
        breakdown = LossBreakdown(data=data, dc=dc, tv=tv, total=total)
        if not need_grad:
            return breakdown, None

        grad = np.sum(d_views * jacobian, axis=-1) + config.lambda_dc * g_dc + config.lambda_tv * g_tv
        return breakdown, grad

    def residual_map(self, values: np.ndarray) -> np.ndarray:
        """Per-pixel ``(H, W)`` data penalty, summed over views, channels and measurements"""
        eps = self.config.robust_eps
        views = render_views(self.center, self.field(values))
        if isinstance(self.references, LightField):
            return np.sum(charbonnier(views - self.references.data, eps), axis=(0, 1, 4))
        total = np.zeros(self.center.shape[:2])
        for model, coded in zip(self.references.models, self.references.observed):
            total += np.sum(charbonnier(simulate_raw(views, model) - as_image(coded.data), eps), axis=-1)
        return total


def total_loss_and_grad(
    center: np.ndarray,
    dfield: DisparityField,
    config: SolverConfig,
    references: References,
) -> Tuple[float, WarpGradient]:
    """Total objective at ``dfield`` and its analytic gradient"""
    objective = Objective(center, config, references, dfield.angular_shape)
    breakdown, grad = objective.evaluate(dfield.values)
    return breakdown.total, WarpGradient(grad)


def loss_breakdown(center: np.ndarray, dfield: DisparityField, config: SolverConfig, references: References) -> LossBreakdown:
    objective = Objective(center, config, references, dfield.angular_shape)
    breakdown, _ = objective.evaluate(dfield.values, need_grad=False)
    return breakdown
