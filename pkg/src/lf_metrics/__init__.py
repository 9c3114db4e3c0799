"""
Quantitative evaluation: PSNR, SSIM, error maps and per-view error curves
"""

from .evaluation import REPORT_SCHEMA_VERSION, CurvePoint, EvalReport, ViewMetrics, evaluate_light_field
from .quality import (
    PSNR_CAP_DB,
    disparity_mae,
    error_map,
    per_view_error,
    psnr,
    sign_agreement,
    ssim,
    textured_mask,
    view_table,
)

__all__ = [
    "CurvePoint",
    "EvalReport",
    "PSNR_CAP_DB",
    "REPORT_SCHEMA_VERSION",
    "ViewMetrics",
    "disparity_mae",
    "error_map",
    "evaluate_light_field",
    "per_view_error",
    "psnr",
    "sign_agreement",
    "ssim",
    "textured_mask",
    "view_table",
]
