"""
Pytest configuration and shared fixtures
"""

import pytest
import os
import sys

import numpy as np

# Add src (and the repo root, for lf_cli) to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from lf_core.light_field import LightField
from lf_solve.config import SolverConfig
from lf_warp.scenes import plane_scene, smooth_texture


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def random_lf(rng) -> LightField:
    """5x5 views of 16x20 random RGB values in [0, 1]"""
    return LightField(rng.uniform(0.0, 1.0, size=(5, 5, 16, 20, 3)))


@pytest.fixture
def constant_lf() -> LightField:
    return LightField(np.full((3, 3, 12, 12, 1), 0.4))


@pytest.fixture
def center_texture() -> np.ndarray:
    """Smooth grayscale (32, 32, 1) texture in [0.1, 0.9]"""
    return smooth_texture(32, 32, seed=3, sigma=1.5)


@pytest.fixture
def plane_scene_pos(center_texture):
    """5x5 plane at disparity +1"""
    return plane_scene(center_texture, 1.0, angular_shape=(5, 5))


@pytest.fixture
def fast_config() -> SolverConfig:
    """Short schedule for tests on small scenes"""
    return SolverConfig(pyramid_levels=2, iters_per_level=80)
