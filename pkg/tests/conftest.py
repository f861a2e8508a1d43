"""
Shared fixtures for the funtf-potential test suite.
"""

import numpy as np
import pytest
from hypothesis import settings as hypothesis_settings

from src.models.frame import FrameSystem
from src.models.space import SpaceSpec
from src.services import frames


@pytest.fixture
def l1_2() -> SpaceSpec:
    return SpaceSpec.lp(2, 1)


@pytest.fixture
def linf_2() -> SpaceSpec:
    return SpaceSpec.lp(2, "inf")


@pytest.fixture
def l2_2() -> SpaceSpec:
    return SpaceSpec.lp(2, 2)


@pytest.fixture
def hexagon() -> SpaceSpec:
    """‖x‖ = max(|x₁|, |x₂|, |x₁ + x₂|), a norm without an unconditional basis."""
    return SpaceSpec.polytope(
        [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [-1.0, -1.0]]
    )


@pytest.fixture
def octagon() -> SpaceSpec:
    """An unconditional polytope norm on ℝ²."""
    return SpaceSpec.polytope(
        [[s1 * a, s2 * b] for a, b in ((1.0, 0.5), (0.5, 1.0)) for s1 in (1, -1) for s2 in (1, -1)]
    )


@pytest.fixture
def counterexamples() -> dict[str, FrameSystem]:
    return frames.counterexample_frames()


@pytest.fixture
def x_frame(counterexamples) -> FrameSystem:
    return counterexamples["x"]


@pytest.fixture
def y_frame(counterexamples) -> FrameSystem:
    return counterexamples["y"]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


hypothesis_settings.register_profile("funtf", deadline=None, max_examples=50)
hypothesis_settings.load_profile("funtf")
