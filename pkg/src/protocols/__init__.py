"""
Protocol definitions for the pipeline plug points
"""

from .estimators import (
    CenterViewEstimatorProtocol,
    CodedImageProtocol,
    CodedModelProtocol,
)

__all__ = [
    "CenterViewEstimatorProtocol",
    "CodedImageProtocol",
    "CodedModelProtocol",
]
