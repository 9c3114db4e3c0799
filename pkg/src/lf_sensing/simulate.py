"""
Forward simulation of coded images
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np

from lf_core.errors import CodedModelError, LightFieldShapeError, LightFieldValueError
from lf_core.light_field import CENTER, LightField, as_image, get_view

from .models import CodedModel, gen_defocus_model

logger = logging.getLogger(__name__)

VALUE_TOLERANCE = 1e-9
UNKNOWN_PROVENANCE = {"scheme": "unknown"}


@dataclass(frozen=True)
class CodedImage:
    """Measurement I_c(x) with the provenance of the model that produced it"""
    data: np.ndarray
    normalized: bool = True
    provenance: Dict[str, Any] = field(default_factory=lambda: dict(UNKNOWN_PROVENANCE))
    provenance_known: bool = True

    def __post_init__(self):
        data = as_image(self.data).copy()
        if not np.all(np.isfinite(data)):
            raise LightFieldValueError("coded image contains non-finite values")
        if data.min() < -VALUE_TOLERANCE:
            raise LightFieldValueError(f"coded image values must be >= 0, got {data.min():.6g}")
        if self.normalized and data.max() > 1.0 + VALUE_TOLERANCE:
            raise LightFieldValueError(f"normalized coded image exceeds 1: {data.max():.6g}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def scheme(self) -> str:
        return str(self.provenance.get("scheme", "unknown"))

    @property
    def spatial_shape(self) -> Tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]


def simulate_raw(views: np.ndarray, model: CodedModel) -> np.ndarray:
    """Weighted angular sum over a raw ``(A_u, A_v, H, W, C)`` array.

    Views are accumulated in storage order so every pixel sees the same summation order.
    """
    a_u, a_v, height, width, _ = views.shape
    if model.angular_shape != (a_u, a_v):
        raise LightFieldShapeError(
            f"model angular extents {model.angular_shape} do not match light field {(a_u, a_v)}"
        )
    weights = model.weights_for(height, width)

    numerator = np.zeros(views.shape[2:])
    for i in range(a_u):
        for j in range(a_v):
            numerator += weights[i, j][..., np.newaxis] * views[i, j]
    if not model.normalize:
        return numerator

    denominator = np.zeros((height, width))
    for i in range(a_u):
        for j in range(a_v):
            denominator += weights[i, j]
    if np.any(denominator <= 0):
        raise CodedModelError(f"{int(np.sum(denominator <= 0))} pixels have zero weight sum under normalization")
    return numerator / denominator[..., np.newaxis]


def simulate(lf: LightField, model: CodedModel) -> CodedImage:
    """I_c(x) = sum_v f(x, v) L(x, v), divided by sum_v f(x, v) when the model normalizes"""
    data = simulate_raw(lf.data, model)
    logger.debug(f"📷 Simulated {model.scheme.value} capture of {lf!r}")
    return CodedImage(data=data, normalized=model.normalize, provenance=model.provenance())


def capture_focus_defocus(lf: LightField) -> Tuple[np.ndarray, CodedImage]:
    """All-in-focus (center view) and defocus (angular average) pair"""
    a_u, a_v = lf.angular_shape
    allinfocus = np.array(get_view(lf, CENTER))
    return allinfocus, simulate(lf, gen_defocus_model(a_u, a_v))
