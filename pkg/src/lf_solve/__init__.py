"""
Disparity-field estimation by direct minimization of the view-synthesis objective
"""

from .config import SolverConfig, SolverMode, parse_override
from .gradcheck import finite_difference_check, penalty_margins, sampling_margin
from .losses import charbonnier, loss_dc, loss_measurement, loss_rec, loss_tv
from .objective import LossBreakdown, Measurements, Objective, loss_breakdown, total_loss_and_grad
from .solver import LevelTrace, SolveReport, merge_sign_branches, mirror_symmetric, solve_disparity

__all__ = [
    "LevelTrace",
    "LossBreakdown",
    "Measurements",
    "Objective",
    "SolveReport",
    "SolverConfig",
    "SolverMode",
    "charbonnier",
    "finite_difference_check",
    "loss_breakdown",
    "loss_dc",
    "loss_measurement",
    "loss_rec",
    "loss_tv",
    "merge_sign_branches",
    "mirror_symmetric",
    "parse_override",
    "penalty_margins",
    "sampling_margin",
    "solve_disparity",
    "total_loss_and_grad",
]
