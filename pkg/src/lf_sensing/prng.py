"""
Seedable code generator with a documented stream

Stream ``pcg64-boxmuller-v1``:
  * state: ``numpy.random.PCG64(seed)`` wrapped in ``numpy.random.Generator``
  * uniform draws: ``Generator.random`` (doubles in [0, 1))
  * gaussian draws: Box-Muller on consecutive uniform blocks. For ``n`` values,
    ``m = ceil(n / 2)`` draws ``u1`` then ``m`` draws ``u2``;
    ``r = sqrt(-2 ln(1 - u1))``, pairs ``(r cos 2πu2, r sin 2πu2)`` are interleaved
    and truncated to ``n``.
"""

from typing import Tuple

import numpy as np

GENERATOR_VERSION = "pcg64-boxmuller-v1"


class CodeGenerator:
    """Deterministic source of code values"""

    version = GENERATOR_VERSION

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._rng = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, shape: Tuple[int, ...]) -> np.ndarray:
        """Uniform values in [0, 1)"""
        return self._rng.random(shape)

    def gaussian(self, shape: Tuple[int, ...], mean: float = 0.0, std: float = 1.0) -> np.ndarray:
        """Normal values via Box-Muller on the uniform stream"""
        count = int(np.prod(shape))
        pairs = (count + 1) // 2
        u1 = self._rng.random(pairs)
        u2 = self._rng.random(pairs)
        radius = np.sqrt(-2.0 * np.log1p(-u1))
        angle = 2.0 * np.pi * u2
        normals = np.empty(2 * pairs)
        normals[0::2] = radius * np.cos(angle)
        normals[1::2] = radius * np.sin(angle)
        return mean + std * normals[:count].reshape(shape)
