"""
Exception hierarchy shared by every light-field module
"""

from typing import Optional


class LightFieldError(Exception):
    """Base class for all light-field errors"""


class LightFieldShapeError(LightFieldError, ValueError):
    """Extents of two objects disagree, or an array has the wrong layout"""


class AngularIndexError(LightFieldError, IndexError):
    """Angular offset or fixed slice index outside the declared extents"""

    def __init__(self, axis: str, value: int, low: int, high: int):
        self.axis = axis
        self.value = value
        self.low = low
        self.high = high
        super().__init__(f"{axis} index {value} outside [{low}, {high}]")


class LightFieldValueError(LightFieldError, ValueError):
    """Values are non-finite or outside the declared range"""


class CodedModelError(LightFieldError, ValueError):
    """Invalid code generator configuration or unusable weights"""


class SolverConfigError(LightFieldError, ValueError):
    """Solver configuration or references do not fit the requested mode"""


class SolverDivergenceError(LightFieldError, RuntimeError):
    """Objective became non-finite during optimization"""

    def __init__(self, message: str, level: Optional[int] = None, iteration: Optional[int] = None):
        self.level = level
        self.iteration = iteration
        where = ""
        if level is not None:
            where = f" (level {level}, iteration {iteration})"
        super().__init__(f"{message}{where}")


class LightFieldFormatError(LightFieldError, ValueError):
    """A stored file is malformed, incomplete or of an unsupported version"""


class LightFieldIOError(LightFieldError, OSError):
    """A required path does not exist or cannot be read"""
