"""
Plug-point protocols for the reconstruction pipeline
"""

from typing import Protocol, Sequence, runtime_checkable

import numpy as np


class CodedImageProtocol(Protocol):
    """A measured image together with its normalization flag"""
    data: np.ndarray
    normalized: bool


class CodedModelProtocol(Protocol):
    """Per-view weights able to report their per-pixel sum"""
    normalize: bool

    def weight_sum(self, height: int, width: int) -> np.ndarray: ...


@runtime_checkable
class CenterViewEstimatorProtocol(Protocol):
    """Source of the centerview the disparity solver warps from"""
    name: str

    def estimate(
        self,
        coded: Sequence[CodedImageProtocol],
        models: Sequence[CodedModelProtocol],
    ) -> np.ndarray:
        """Return the centerview estimate as an ``(H, W, C)`` array"""
        ...
