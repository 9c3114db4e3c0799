"""
Image and light-field quality measures
"""

import math
from typing import Iterable, Optional, Set

import numpy as np
import pandas as pd
from skimage.metrics import structural_similarity

from lf_core.errors import LightFieldShapeError, LightFieldValueError
from lf_core.light_field import AngularOffset, LightField, as_image

PSNR_CAP_DB = 99.0
SSIM_SIGMA = 1.5
SSIM_WINDOW = 11
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def _pair(a: np.ndarray, b: np.ndarray):
    a, b = as_image(a), as_image(b)
    if a.shape != b.shape:
        raise LightFieldShapeError(f"images differ in shape: {a.shape} vs {b.shape}")
    return a, b


def psnr(a: np.ndarray, b: np.ndarray, peak: float = 1.0) -> float:
    """10 log10(peak² / MSE) with MSE pooled over channels; capped at ``PSNR_CAP_DB``"""
    a, b = _pair(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(10.0 * math.log10(peak * peak / mse), PSNR_CAP_DB)


def ssim(a: np.ndarray, b: np.ndarray, peak: float = 1.0) -> float:
    """Mean local SSIM, 11x11 Gaussian window with σ = 1.5, K1 = 0.01, K2 = 0.03"""
    a, b = _pair(a, b)
    if min(a.shape[:2]) < SSIM_WINDOW:
        raise LightFieldShapeError(f"images of {a.shape[0]}x{a.shape[1]} px are smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} SSIM window")
    value = structural_similarity(
        a,
        b,
        data_range=peak,
        channel_axis=-1,
        gaussian_weights=True,
        sigma=SSIM_SIGMA,
        use_sample_covariance=False,
        K1=SSIM_K1,
        K2=SSIM_K2,
    )
    # rounding can push identical images a hair past 1
    return float(np.clip(value, -1.0, 1.0))


def error_map(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-pixel absolute error, averaged over channels"""
    a, b = _pair(a, b)
    return np.mean(np.abs(a - b), axis=-1)


def _included(lf: LightField, exclude: Optional[Iterable[AngularOffset]]) -> list:
    excluded: Set[AngularOffset] = {AngularOffset(int(q[0]), int(q[1])) for q in (exclude or [])}
    offsets = [q for q in lf.offsets() if q not in excluded]
    if not offsets:
        raise LightFieldValueError("every view is excluded; nothing left to evaluate")
    return offsets


def view_table(test: LightField, reference: LightField, exclude: Optional[Iterable[AngularOffset]] = None, with_ssim: bool = True) -> pd.DataFrame:
    """One row per evaluated view: ``q_u, q_v, mean_l1, psnr`` and optionally ``ssim``"""
    test.require_same_extents(reference)
    rows = []
    for q in _included(test, exclude):
        i, j = test.index_of(q)
        a, b = test.data[i, j], reference.data[i, j]
        row = {"q_u": q.q_u, "q_v": q.q_v, "mean_l1": float(np.mean(np.abs(a - b))), "psnr": psnr(a, b)}
        if with_ssim:
            row["ssim"] = ssim(a, b)
        rows.append(row)
    return pd.DataFrame(rows)


def per_view_error(test: LightField, reference: LightField, exclude: Optional[Iterable[AngularOffset]] = None) -> pd.DataFrame:
    """Mean ℓ1 per view, averaged over the vertical angular axis: one row per ``q_v``"""
    table = view_table(test, reference, exclude, with_ssim=False)
    curve = table.groupby("q_v", sort=True)["mean_l1"].agg(["mean", "count"]).reset_index()
    return curve.rename(columns={"mean": "mean_l1", "count": "views"})


def textured_mask(image: np.ndarray, threshold: float = 0.05) -> np.ndarray:
    """Pixels whose gradient magnitude (central differences, channel mean) reaches ``threshold``"""
    gray = as_image(image).mean(axis=-1)
    grad_y, grad_x = np.gradient(gray)
    return np.hypot(grad_y, grad_x) >= threshold


def disparity_mae(estimate: np.ndarray, truth: np.ndarray, mask: Optional[np.ndarray] = None) -> float:
    """Mean absolute disparity error over all views, restricted to ``mask`` pixels"""
    estimate, truth = np.asarray(estimate, dtype=np.float64), np.asarray(truth, dtype=np.float64)
    if estimate.shape != truth.shape:
        raise LightFieldShapeError(f"disparity fields differ in shape: {estimate.shape} vs {truth.shape}")
    errors = np.abs(estimate - truth)
    if mask is None:
        return float(np.mean(errors))
    mask = np.broadcast_to(np.asarray(mask, dtype=bool), errors.shape)
    if not mask.any():
        raise LightFieldValueError("disparity mask selects no pixels")
    return float(np.mean(errors[mask]))


def sign_agreement(estimate: np.ndarray, truth: np.ndarray, mask: Optional[np.ndarray] = None) -> float:
    """Fraction of (masked) entries whose disparity sign matches the truth"""
    estimate, truth = np.asarray(estimate, dtype=np.float64), np.asarray(truth, dtype=np.float64)
    agree = np.sign(estimate) == np.sign(truth)
    if mask is None:
        return float(np.mean(agree))
    mask = np.broadcast_to(np.asarray(mask, dtype=bool), agree.shape)
    return float(np.mean(agree[mask]))
