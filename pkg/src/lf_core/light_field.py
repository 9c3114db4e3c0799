"""
4D light-field container, angular indexing, EPI extraction and the shear (refocus) transform

Storage layout is ``(u, v, y, x, c)``. Storage index ``(i, j)`` maps to the angular
offset ``(i - (A_u - 1) / 2, j - (A_v - 1) / 2)`` so the center view sits at ``(0, 0)``.

Displacement convention (shared with ``lf_warp``): a positive scalar ``s`` applied at
offset ``(q_u, q_v)`` samples the source at ``(y + s * q_u, x + s * q_v)``.
"""

from dataclasses import dataclass
from typing import Iterator, List, NamedTuple, Tuple, Union

import numpy as np

from .errors import AngularIndexError, LightFieldShapeError, LightFieldValueError
from .sampling import pixel_grid, sample_bilinear

VALUE_TOLERANCE = 1e-9


class AngularOffset(NamedTuple):
    """Viewpoint relative to the center view; ``(0, 0)`` is the center"""
    q_u: int
    q_v: int

    @classmethod
    def parse(cls, text: str) -> "AngularOffset":
        """Parse ``"q_u,q_v"``"""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 2:
            raise ValueError(f"angular offset must look like 'q_u,q_v', got {text!r}")
        return cls(int(parts[0]), int(parts[1]))

    def __str__(self) -> str:
        return f"{self.q_u},{self.q_v}"


OffsetLike = Union[AngularOffset, Tuple[int, int]]
CENTER = AngularOffset(0, 0)


class LightField:
    """Immutable light field L(x, v) sampled on a rectangular angular grid"""

    def __init__(self, data: np.ndarray, validate_range: bool = True):
        arr = np.array(data, dtype=np.float64)
        if arr.ndim == 4:
            arr = arr[..., np.newaxis]
        if arr.ndim != 5:
            raise LightFieldShapeError(f"light field data must be (A_u, A_v, H, W[, C]), got shape {arr.shape}")

        a_u, a_v, height, width, channels = arr.shape
        if a_u < 1 or a_v < 1 or a_u % 2 == 0 or a_v % 2 == 0:
            raise LightFieldShapeError(f"angular extents must be odd and >= 1, got {a_u}x{a_v}")
        if height < 2 or width < 2:
            raise LightFieldShapeError(f"spatial extents must be >= 2, got {height}x{width}")
        if channels not in (1, 3):
            raise LightFieldShapeError(f"channels must be 1 or 3, got {channels}")
        if not np.all(np.isfinite(arr)):
            raise LightFieldValueError("light field contains non-finite values")
        if validate_range and (arr.min() < -VALUE_TOLERANCE or arr.max() > 1.0 + VALUE_TOLERANCE):
            raise LightFieldValueError(
                f"light field values must lie in [0, 1], got [{arr.min():.6g}, {arr.max():.6g}]"
            )

        arr.setflags(write=False)
        self._data = arr

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def angular_shape(self) -> Tuple[int, int]:
        return self._data.shape[0], self._data.shape[1]

    @property
    def spatial_shape(self) -> Tuple[int, int]:
        return self._data.shape[2], self._data.shape[3]

    @property
    def channels(self) -> int:
        return self._data.shape[4]

    @property
    def radius(self) -> Tuple[int, int]:
        """Largest offset magnitude along u and v"""
        a_u, a_v = self.angular_shape
        return (a_u - 1) // 2, (a_v - 1) // 2

    def index_of(self, q: OffsetLike) -> Tuple[int, int]:
        """Storage index of an angular offset"""
        r_u, r_v = self.radius
        q_u, q_v = int(q[0]), int(q[1])
        if not -r_u <= q_u <= r_u:
            raise AngularIndexError("angular u", q_u, -r_u, r_u)
        if not -r_v <= q_v <= r_v:
            raise AngularIndexError("angular v", q_v, -r_v, r_v)
        return q_u + r_u, q_v + r_v

    def offset_of(self, i: int, j: int) -> AngularOffset:
        r_u, r_v = self.radius
        return AngularOffset(i - r_u, j - r_v)

    def offsets(self) -> List[AngularOffset]:
        """All offsets in storage order"""
        a_u, a_v = self.angular_shape
        return [self.offset_of(i, j) for i in range(a_u) for j in range(a_v)]

    def offset_grid(self) -> Tuple[np.ndarray, np.ndarray]:
        """Offsets as two ``(A_u, A_v)`` float arrays"""
        r_u, r_v = self.radius
        q_u, q_v = np.meshgrid(
            np.arange(-r_u, r_u + 1, dtype=np.float64),
            np.arange(-r_v, r_v + 1, dtype=np.float64),
            indexing="ij",
        )
        return q_u, q_v

    def same_extents(self, other: "LightField") -> bool:
        return self._data.shape == other.data.shape

    def require_same_extents(self, other: "LightField", what: str = "light fields") -> None:
        if not self.same_extents(other):
            raise LightFieldShapeError(f"{what} differ in extents: {self._data.shape} vs {other.data.shape}")

    def __iter__(self) -> Iterator[Tuple[AngularOffset, np.ndarray]]:
        a_u, a_v = self.angular_shape
        for i in range(a_u):
            for j in range(a_v):
                yield self.offset_of(i, j), self._data[i, j]

    def __repr__(self) -> str:
        a_u, a_v, height, width, channels = self._data.shape
        return f"LightField({a_u}x{a_v} views, {height}x{width} px, {channels} ch)"


@dataclass(frozen=True)
class Epi:
    """Epipolar-plane image: one angular axis (rows) against one spatial axis (columns)"""
    data: np.ndarray
    spatial_axis: str
    fixed_spatial: int
    fixed_angular: int
    angular_offsets: Tuple[int, ...]


def as_image(image: np.ndarray) -> np.ndarray:
    """Promote an ``(H, W)`` image to ``(H, W, 1)`` float64"""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[..., np.newaxis]
    if arr.ndim != 3:
        raise LightFieldShapeError(f"image must be (H, W[, C]), got shape {arr.shape}")
    return arr


def get_view(lf: LightField, q: OffsetLike) -> np.ndarray:
    """Sub-aperture image at offset ``q`` as a read-only ``(H, W, C)`` array"""
    i, j = lf.index_of(q)
    return lf.data[i, j]


def extract_epi(lf: LightField, spatial_axis: str, fixed_row_or_col: int, fixed_angular: int) -> Epi:
    """Slice an EPI.

    ``spatial_axis='x'`` fixes image row ``y`` and angular offset ``q_u``, rows run over ``q_v``.
    ``spatial_axis='y'`` fixes image column ``x`` and angular offset ``q_v``, rows run over ``q_u``.
    """
    height, width = lf.spatial_shape
    r_u, r_v = lf.radius
    if spatial_axis == "x":
        if not 0 <= fixed_row_or_col < height:
            raise AngularIndexError("spatial y", fixed_row_or_col, 0, height - 1)
        i, _ = lf.index_of((fixed_angular, 0))
        data = lf.data[i, :, fixed_row_or_col, :, :]
        offsets = tuple(range(-r_v, r_v + 1))
    elif spatial_axis == "y":
        if not 0 <= fixed_row_or_col < width:
            raise AngularIndexError("spatial x", fixed_row_or_col, 0, width - 1)
        _, j = lf.index_of((0, fixed_angular))
        data = lf.data[:, j, :, fixed_row_or_col, :]
        offsets = tuple(range(-r_u, r_u + 1))
    else:
        raise ValueError(f"spatial_axis must be 'x' or 'y', got {spatial_axis!r}")
    return Epi(
        data=data,
        spatial_axis=spatial_axis,
        fixed_spatial=fixed_row_or_col,
        fixed_angular=fixed_angular,
        angular_offsets=offsets,
    )


def shear(lf: LightField, s: float) -> LightField:
    """Refocus: L'(x, v) = L(x + s * v, v), bilinear with clamp-to-edge"""
    s = float(s)
    if not np.isfinite(s):
        raise LightFieldValueError(f"shear amount must be finite, got {s}")
    if s == 0.0:
        return lf

    a_u, a_v, height, width, channels = lf.data.shape
    q_u, q_v = lf.offset_grid()
    ys, xs = pixel_grid(height, width)
    stack = lf.data.reshape(a_u * a_v, height, width, channels)
    sample_y = ys[None] + s * q_u.reshape(-1, 1, 1)
    sample_x = xs[None] + s * q_v.reshape(-1, 1, 1)
    sheared = sample_bilinear(stack, sample_y, sample_x)
    return LightField(sheared.reshape(lf.data.shape), validate_range=False)
