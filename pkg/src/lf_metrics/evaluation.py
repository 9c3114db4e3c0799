"""
Evaluation reports over whole light fields
"""

from typing import Iterable, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from lf_core.light_field import AngularOffset, LightField

from .quality import PSNR_CAP_DB, SSIM_K1, SSIM_K2, SSIM_SIGMA, SSIM_WINDOW, per_view_error, view_table

REPORT_SCHEMA_VERSION = "1.0"


class ViewMetrics(BaseModel):
    q_u: int
    q_v: int
    psnr: float
    ssim: float = Field(ge=-1.0, le=1.0)
    mean_l1: float


class CurvePoint(BaseModel):
    q_v: int
    mean_l1: float
    views: int


class EvalReport(BaseModel):
    schema_version: str = REPORT_SCHEMA_VERSION
    psnr_cap_db: float = PSNR_CAP_DB
    ssim_window: int = SSIM_WINDOW
    ssim_sigma: float = SSIM_SIGMA
    ssim_k1: float = SSIM_K1
    ssim_k2: float = SSIM_K2
    mean_psnr: float
    mean_ssim: float = Field(ge=-1.0, le=1.0)
    mean_l1: float
    views: List[ViewMetrics]
    excluded: List[str]
    curve: List[CurvePoint]


def evaluate_light_field(test: LightField, reference: LightField, exclude: Optional[Iterable[AngularOffset]] = None) -> EvalReport:
    """PSNR/SSIM per view and their uniform means over every non-excluded view"""
    excluded = sorted({AngularOffset(int(q[0]), int(q[1])) for q in (exclude or [])})
    table = view_table(test, reference, excluded)
    curve = per_view_error(test, reference, excluded)
    return EvalReport(
        mean_psnr=float(np.mean(table["psnr"])),
        mean_ssim=float(np.mean(table["ssim"])),
        mean_l1=float(np.mean(table["mean_l1"])),
        views=[ViewMetrics(**row) for row in table.to_dict(orient="records")],
        excluded=[str(q) for q in excluded],
        curve=[CurvePoint(**row) for row in curve.to_dict(orient="records")],
    )
