"""
Light-field core: container, angular indexing, EPIs, shear and bilinear sampling
"""

from .errors import (
    AngularIndexError,
    CodedModelError,
    LightFieldError,
    LightFieldFormatError,
    LightFieldIOError,
    LightFieldShapeError,
    LightFieldValueError,
    SolverConfigError,
    SolverDivergenceError,
)
from .light_field import (
    CENTER,
    AngularOffset,
    Epi,
    LightField,
    as_image,
    extract_epi,
    get_view,
    shear,
)

__all__ = [
    "AngularIndexError",
    "AngularOffset",
    "CENTER",
    "CodedModelError",
    "Epi",
    "LightField",
    "LightFieldError",
    "LightFieldFormatError",
    "LightFieldIOError",
    "LightFieldShapeError",
    "LightFieldValueError",
    "SolverConfigError",
    "SolverDivergenceError",
    "as_image",
    "extract_epi",
    "get_view",
    "shear",
]
