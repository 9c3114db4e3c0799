"""
Disparity fields and their gradients
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from lf_core.errors import AngularIndexError, LightFieldShapeError, LightFieldValueError
from lf_core.light_field import AngularOffset, OffsetLike

D_MAX = 10.0
RANGE_TOLERANCE = 1e-9


class DisparityField:
    """D(x, v) in pixels per unit angular step, stored ``(A_u, A_v, H, W)``"""

    def __init__(self, values: np.ndarray, d_max: float = D_MAX):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 4:
            raise LightFieldShapeError(f"disparity field must be (A_u, A_v, H, W), got shape {arr.shape}")
        a_u, a_v, height, width = arr.shape
        if a_u % 2 == 0 or a_v % 2 == 0:
            raise LightFieldShapeError(f"angular extents must be odd, got {a_u}x{a_v}")
        if height < 2 or width < 2:
            raise LightFieldShapeError(f"spatial extents must be >= 2, got {height}x{width}")
        if not np.all(np.isfinite(arr)):
            raise LightFieldValueError("disparity field contains non-finite values")
        if d_max <= 0:
            raise LightFieldValueError(f"d_max must be positive, got {d_max}")
        if np.abs(arr).max() > d_max + RANGE_TOLERANCE:
            raise LightFieldValueError(f"disparities must lie in [-{d_max}, {d_max}], got max |D| = {np.abs(arr).max():.6g}")

        arr.setflags(write=False)
        self._values = arr
        self.d_max = float(d_max)

    @classmethod
    def projected(cls, values: np.ndarray, d_max: float = D_MAX) -> "DisparityField":
        """Clip into ``[-d_max, d_max]`` before construction"""
        return cls(np.clip(values, -d_max, d_max), d_max)

    @classmethod
    def constant(cls, angular_shape: Tuple[int, int], spatial_shape: Tuple[int, int], d: float, d_max: float = D_MAX) -> "DisparityField":
        return cls(np.full(tuple(angular_shape) + tuple(spatial_shape), float(d)), d_max)

    @classmethod
    def from_map(cls, disparity_map: np.ndarray, angular_shape: Tuple[int, int], d_max: float = D_MAX) -> "DisparityField":
        """Same map at every view"""
        disparity_map = np.asarray(disparity_map, dtype=np.float64)
        return cls(np.broadcast_to(disparity_map, tuple(angular_shape) + disparity_map.shape), d_max)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def angular_shape(self) -> Tuple[int, int]:
        return self._values.shape[0], self._values.shape[1]

    @property
    def spatial_shape(self) -> Tuple[int, int]:
        return self._values.shape[2], self._values.shape[3]

    @property
    def radius(self) -> Tuple[int, int]:
        a_u, a_v = self.angular_shape
        return (a_u - 1) // 2, (a_v - 1) // 2

    def contains(self, q: OffsetLike) -> bool:
        r_u, r_v = self.radius
        return -r_u <= q[0] <= r_u and -r_v <= q[1] <= r_v

    def index_of(self, q: OffsetLike) -> Tuple[int, int]:
        r_u, r_v = self.radius
        q_u, q_v = int(q[0]), int(q[1])
        if not -r_u <= q_u <= r_u:
            raise AngularIndexError("angular u", q_u, -r_u, r_u)
        if not -r_v <= q_v <= r_v:
            raise AngularIndexError("angular v", q_v, -r_v, r_v)
        return q_u + r_u, q_v + r_v

    def map_at(self, q: OffsetLike) -> np.ndarray:
        i, j = self.index_of(q)
        return self._values[i, j]

    def offsets(self) -> List[AngularOffset]:
        r_u, r_v = self.radius
        a_u, a_v = self.angular_shape
        return [AngularOffset(i - r_u, j - r_v) for i in range(a_u) for j in range(a_v)]

    def offset_grid(self) -> Tuple[np.ndarray, np.ndarray]:
        r_u, r_v = self.radius
        return np.meshgrid(
            np.arange(-r_u, r_u + 1, dtype=np.float64),
            np.arange(-r_v, r_v + 1, dtype=np.float64),
            indexing="ij",
        )

    def with_values(self, values: np.ndarray) -> "DisparityField":
        return DisparityField(values, self.d_max)

    def __repr__(self) -> str:
        a_u, a_v, height, width = self._values.shape
        return f"DisparityField({a_u}x{a_v} views, {height}x{width} px, d_max={self.d_max:g})"


@dataclass(frozen=True)
class WarpGradient:
    """Derivative of a scalar objective with respect to every disparity value"""
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 4:
            raise LightFieldShapeError(f"gradient must be (A_u, A_v, H, W), got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise LightFieldValueError("gradient contains non-finite values")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros_like(cls, dfield: DisparityField) -> "WarpGradient":
        return cls(np.zeros_like(dfield.values))

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.values ** 2)))
