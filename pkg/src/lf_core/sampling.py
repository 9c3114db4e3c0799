"""
Bilinear sampling with clamp-to-edge boundaries, its coordinate derivatives and its adjoint

All functions work on stacks: ``source`` is ``(N, H, W)`` or ``(N, H, W, C)`` and the
coordinate arrays are ``(N, ...)``; sample ``n`` of the output reads from ``source[n]``.
"""

from typing import Tuple

import numpy as np

from .errors import LightFieldShapeError


def _cell(coords: np.ndarray, size: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Lower cell corner, fractional weight and 'not clamped' mask along one axis.

    Integer coordinates resolve to the lower/left cell, so the derivative at a
    cell boundary is the one of the cell below it.
    """
    clamped = np.clip(coords, 0.0, size - 1.0)
    lower = np.clip(np.ceil(clamped) - 1.0, 0, size - 2).astype(np.intp)
    weight = clamped - lower
    moving = (coords > 0.0) & (coords <= size - 1.0)
    return lower, weight, moving


def _prepare(shape: Tuple[int, ...], ys: np.ndarray, xs: np.ndarray):
    if len(shape) not in (3, 4):
        raise LightFieldShapeError(f"source stack must be (N, H, W[, C]), got shape {shape}")
    ys = np.asarray(ys, dtype=np.float64)
    xs = np.asarray(xs, dtype=np.float64)
    if ys.shape != xs.shape or ys.ndim == 0 or ys.shape[0] != shape[0]:
        raise LightFieldShapeError(
            f"coordinate shapes {ys.shape} / {xs.shape} do not match source stack {shape}"
        )
    height, width = shape[1], shape[2]
    if height < 2 or width < 2:
        raise LightFieldShapeError(f"bilinear sampling needs at least 2x2 pixels, got {height}x{width}")

    y0, wy, my = _cell(ys, height)
    x0, wx, mx = _cell(xs, width)
    batch = np.arange(shape[0]).reshape((-1,) + (1,) * (ys.ndim - 1))
    batch = np.broadcast_to(batch, ys.shape)
    return batch, y0, wy, my, x0, wx, mx


def _corners(source, batch, y0, x0):
    i00 = source[batch, y0, x0]
    i01 = source[batch, y0, x0 + 1]
    i10 = source[batch, y0 + 1, x0]
    i11 = source[batch, y0 + 1, x0 + 1]
    return i00, i01, i10, i11


def _expand(weight: np.ndarray, ndim: int) -> np.ndarray:
    return weight[..., None] if ndim == 4 else weight


def sample_bilinear(source: np.ndarray, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Sample ``source[n]`` at ``(ys[n], xs[n])``"""
    batch, y0, wy, _, x0, wx, _ = _prepare(source.shape, ys, xs)
    i00, i01, i10, i11 = _corners(source, batch, y0, x0)
    wy = _expand(wy, source.ndim)
    wx = _expand(wx, source.ndim)
    top = (1.0 - wx) * i00 + wx * i01
    bottom = (1.0 - wx) * i10 + wx * i11
    return (1.0 - wy) * top + wy * bottom


def sample_bilinear_with_grad(source: np.ndarray, ys: np.ndarray, xs: np.ndarray):
    """Sample and return the partial derivatives of the interpolant along y and x.

    Derivatives are zero wherever a coordinate sits in the clamped region.
    """
    batch, y0, wy, my, x0, wx, mx = _prepare(source.shape, ys, xs)
    i00, i01, i10, i11 = _corners(source, batch, y0, x0)
    wy = _expand(wy, source.ndim)
    wx = _expand(wx, source.ndim)
    top = (1.0 - wx) * i00 + wx * i01
    bottom = (1.0 - wx) * i10 + wx * i11
    values = (1.0 - wy) * top + wy * bottom

    d_y = (bottom - top) * _expand(my, source.ndim)
    d_x = ((1.0 - wy) * (i01 - i00) + wy * (i11 - i10)) * _expand(mx, source.ndim)
    return values, d_y, d_x


def scatter_bilinear(values: np.ndarray, ys: np.ndarray, xs: np.ndarray, source_shape: Tuple[int, ...]) -> np.ndarray:
    """Adjoint of :func:`sample_bilinear` with respect to the source values.

    ``values`` has the shape of a sample output; the result has ``source_shape``.
    Each corner is accumulated with ``np.bincount`` in sample order, so the
    summation order is fixed.
    """
    source_shape = tuple(source_shape)
    batch, y0, wy, _, x0, wx, _ = _prepare(source_shape, ys, xs)
    channels = source_shape[3] if len(source_shape) == 4 else 1
    size = source_shape[0] * source_shape[1] * source_shape[2]
    values = np.asarray(values, dtype=np.float64).reshape(batch.shape + (channels,))

    corners = (
        (y0, x0, (1.0 - wy) * (1.0 - wx)),
        (y0, x0 + 1, (1.0 - wy) * wx),
        (y0 + 1, x0, wy * (1.0 - wx)),
        (y0 + 1, x0 + 1, wy * wx),
    )
    out = np.zeros((size, channels), dtype=np.float64)
    for cy, cx, weight in corners:
        flat = np.ravel_multi_index((batch, cy, cx), source_shape[:3]).ravel()
        for c in range(channels):
            out[:, c] += np.bincount(flat, weights=(weight * values[..., c]).ravel(), minlength=size)
    return out.reshape(source_shape)


def lower_corners(ys: np.ndarray, xs: np.ndarray, height: int, width: int) -> Tuple[np.ndarray, np.ndarray]:
    """Top-left corner of the cell each coordinate interpolates from"""
    y0, _, _ = _cell(np.asarray(ys, dtype=np.float64), height)
    x0, _, _ = _cell(np.asarray(xs, dtype=np.float64), width)
    return y0, x0


def pixel_grid(height: int, width: int) -> Tuple[np.ndarray, np.ndarray]:
    """Integer pixel coordinates ``(ys, xs)`` of an ``height x width`` image as float arrays"""
    ys, xs = np.meshgrid(np.arange(height, dtype=np.float64), np.arange(width, dtype=np.float64), indexing="ij")
    return ys, xs
