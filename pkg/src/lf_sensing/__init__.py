"""
Code generation and forward simulation of coded light-field captures
"""

from .centerview import CodeNormalizedCenterView, GivenFileCenterView, OracleCenterView
from .models import (
    CodedModel,
    ModelHeader,
    Scheme,
    gen_aperture_model,
    gen_aperture_models,
    gen_clf_model,
    gen_defocus_model,
    gen_pinhole_model,
    regenerate_model,
)
from .prng import GENERATOR_VERSION, CodeGenerator
from .simulate import CodedImage, capture_focus_defocus, simulate, simulate_raw

__all__ = [
    "CodeGenerator",
    "CodeNormalizedCenterView",
    "CodedImage",
    "CodedModel",
    "GENERATOR_VERSION",
    "GivenFileCenterView",
    "ModelHeader",
    "OracleCenterView",
    "Scheme",
    "capture_focus_defocus",
    "gen_aperture_model",
    "gen_aperture_models",
    "gen_clf_model",
    "gen_defocus_model",
    "gen_pinhole_model",
    "regenerate_model",
    "simulate",
    "simulate_raw",
]
