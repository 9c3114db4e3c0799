"""
Coded capture models: per-view weight maps for heterodyne mask, coded aperture,
defocus and pinhole capture
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from lf_core.errors import CodedModelError, LightFieldShapeError

from .prng import GENERATOR_VERSION, CodeGenerator

CLF_CODE_MEAN = 0.5
CLF_CODE_STD = 0.25
MODEL_FORMAT_VERSION = "1.0"


class Scheme(str, Enum):
    """Capture schemes a CodedModel can describe"""
    CLF = "clf"
    CODED_APERTURE = "coded_aperture"
    DEFOCUS = "defocus"
    PINHOLE = "pinhole"


class ModelHeader(BaseModel):
    """Provenance of a CodedModel; also the JSON header of the model container"""
    model_config = ConfigDict(extra="forbid")

    scheme: Scheme
    A_u: int
    A_v: int
    H: int
    W: int
    tile: Optional[int] = None
    seed: Optional[int] = None
    shift_per_view: Optional[int] = None
    normalize: bool = True
    generator_version: str = GENERATOR_VERSION
    format_version: str = MODEL_FORMAT_VERSION


def _as_float32_exact(values: np.ndarray) -> np.ndarray:
    # weights are kept float32-representable so the container payload roundtrips bit-exactly
    return np.asarray(values, dtype=np.float32).astype(np.float64)


@dataclass(frozen=True)
class CodedModel:
    """Per-view weights f(x, v) indexed ``(u, v, y, x)``.

    Spatially constant schemes store ``(A_u, A_v, 1, 1)`` weights that broadcast over
    any image size.
    """
    weights: np.ndarray
    scheme: Scheme
    normalize: bool = True
    seed: Optional[int] = None
    tile: Optional[int] = None
    shift_per_view: Optional[int] = None
    generator_version: str = GENERATOR_VERSION
    extra: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        weights = _as_float32_exact(self.weights)
        if weights.ndim != 4:
            raise LightFieldShapeError(f"model weights must be (A_u, A_v, H, W), got shape {weights.shape}")
        if weights.shape[0] % 2 == 0 or weights.shape[1] % 2 == 0:
            raise LightFieldShapeError(f"model angular extents must be odd, got {weights.shape[:2]}")
        if not np.all(np.isfinite(weights)) or weights.min() < 0.0 or weights.max() > 1.0:
            raise CodedModelError("model weights must be finite and lie in [0, 1]")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "scheme", Scheme(self.scheme))

    @property
    def angular_shape(self) -> Tuple[int, int]:
        return self.weights.shape[0], self.weights.shape[1]

    @property
    def spatial_shape(self) -> Tuple[int, int]:
        return self.weights.shape[2], self.weights.shape[3]

    @property
    def spatially_constant(self) -> bool:
        return self.spatial_shape == (1, 1)

    def weights_for(self, height: int, width: int) -> np.ndarray:
        """Weights broadcast to ``(A_u, A_v, height, width)``"""
        if self.spatially_constant:
            return np.broadcast_to(self.weights, self.angular_shape + (height, width))
        if self.spatial_shape != (height, width):
            raise LightFieldShapeError(
                f"model spatial extents {self.spatial_shape} do not match image {(height, width)}"
            )
        return self.weights

    def weight_sum(self, height: int, width: int) -> np.ndarray:
        """Per-pixel sum of weights over views, ``(height, width)``"""
        return self.weights_for(height, width).sum(axis=(0, 1))

    def header(self) -> ModelHeader:
        a_u, a_v = self.angular_shape
        height, width = self.spatial_shape
        return ModelHeader(
            scheme=self.scheme,
            A_u=a_u,
            A_v=a_v,
            H=height,
            W=width,
            tile=self.tile,
            seed=self.seed,
            shift_per_view=self.shift_per_view,
            normalize=self.normalize,
            generator_version=self.generator_version,
        )

    def provenance(self) -> Dict[str, Any]:
        return self.header().model_dump(mode="json")


def _check_angular(a_u: int, a_v: int) -> None:
    if a_u < 1 or a_v < 1 or a_u % 2 == 0 or a_v % 2 == 0:
        raise CodedModelError(f"angular extents must be odd and >= 1, got {a_u}x{a_v}")


def gen_clf_model(
    a_u: int,
    a_v: int,
    tile: int = 15,
    seed: int = 0,
    shift_per_view: int = 1,
    spatial_shape: Tuple[int, int] = (15, 15),
    normalize: bool = True,
) -> CodedModel:
    """Heterodyne mask near the sensor.

    A ``tile x tile`` Gaussian code (mean 0.5, std 0.25, clipped to [0, 1]) is tiled
    periodically over the sensor; the map seen by offset ``(q_u, q_v)`` is that tiling
    shifted by ``shift_per_view * (q_u, q_v)`` pixels.
    """
    _check_angular(a_u, a_v)
    height, width = spatial_shape
    if tile < 1:
        raise CodedModelError(f"tile must be >= 1, got {tile}")
    if tile > min(height, width):
        raise CodedModelError(f"tile {tile} exceeds the smaller sensor extent {min(height, width)}")

    generator = CodeGenerator(seed)
    pattern = np.clip(generator.gaussian((tile, tile), CLF_CODE_MEAN, CLF_CODE_STD), 0.0, 1.0)

    r_u, r_v = (a_u - 1) // 2, (a_v - 1) // 2
    rows = np.arange(height)
    cols = np.arange(width)
    weights = np.empty((a_u, a_v, height, width))
    for i in range(a_u):
        for j in range(a_v):
            dy = shift_per_view * (i - r_u)
            dx = shift_per_view * (j - r_v)
            weights[i, j] = pattern[np.ix_((rows - dy) % tile, (cols - dx) % tile)]

    return CodedModel(
        weights=weights,
        scheme=Scheme.CLF,
        normalize=normalize,
        seed=seed,
        tile=tile,
        shift_per_view=shift_per_view,
    )


def gen_aperture_model(a_u: int, a_v: int, seed: int = 0, normalize: bool = True) -> CodedModel:
    """Coded aperture: one uniform [0, 1) value per view, spatially constant"""
    _check_angular(a_u, a_v)
    code = CodeGenerator(seed).uniform((a_u, a_v))
    return CodedModel(
        weights=code[:, :, np.newaxis, np.newaxis],
        scheme=Scheme.CODED_APERTURE,
        normalize=normalize,
        seed=seed,
    )


def gen_aperture_models(a_u: int, a_v: int, seed: int = 0, shots: int = 1, normalize: bool = True) -> List[CodedModel]:
    """Independent coded-aperture shots with seeds ``seed, seed + 1, ...``"""
    if shots < 1:
        raise CodedModelError(f"shots must be >= 1, got {shots}")
    return [gen_aperture_model(a_u, a_v, seed + k, normalize) for k in range(shots)]


def gen_defocus_model(a_u: int, a_v: int, normalize: bool = True) -> CodedModel:
    """Wide-open aperture: uniform average over all views"""
    _check_angular(a_u, a_v)
    weights = np.full((a_u, a_v, 1, 1), 1.0 / (a_u * a_v))
    return CodedModel(weights=weights, scheme=Scheme.DEFOCUS, normalize=normalize)


def gen_pinhole_model(a_u: int, a_v: int, normalize: bool = True) -> CodedModel:
    """Narrow aperture: the center view only"""
    _check_angular(a_u, a_v)
    weights = np.zeros((a_u, a_v, 1, 1))
    weights[(a_u - 1) // 2, (a_v - 1) // 2] = 1.0
    return CodedModel(weights=weights, scheme=Scheme.PINHOLE, normalize=normalize)


def regenerate_model(header: ModelHeader) -> CodedModel:
    """Rebuild a model from recorded provenance"""
    if header.generator_version != GENERATOR_VERSION:
        raise CodedModelError(
            f"cannot regenerate model from generator {header.generator_version!r}; "
            f"this build provides {GENERATOR_VERSION!r}"
        )
    scheme = Scheme(header.scheme)
    if scheme is Scheme.CLF:
        if header.tile is None or header.seed is None or header.shift_per_view is None:
            raise CodedModelError("clf provenance needs tile, seed and shift_per_view")
        return gen_clf_model(
            header.A_u, header.A_v,
            tile=header.tile,
            seed=header.seed,
            shift_per_view=header.shift_per_view,
            spatial_shape=(header.H, header.W),
            normalize=header.normalize,
        )
    if scheme is Scheme.CODED_APERTURE:
        if header.seed is None:
            raise CodedModelError("coded-aperture provenance needs a seed")
        return gen_aperture_model(header.A_u, header.A_v, header.seed, header.normalize)
    if scheme is Scheme.DEFOCUS:
        return gen_defocus_model(header.A_u, header.A_v, header.normalize)
    return gen_pinhole_model(header.A_u, header.A_v, header.normalize)


def clipped_fraction(model: CodedModel) -> float:
    """Share of weights sitting exactly at a clip bound"""
    w = model.weights
    return float(np.mean((w == 0.0) | (w == 1.0)))


def expected_clipped_fraction() -> float:
    """Two-sided Gaussian tail mass beyond the clip bounds of the CLF code"""
    z = (1.0 - CLF_CODE_MEAN) / CLF_CODE_STD
    return math.erfc(z / math.sqrt(2.0))
