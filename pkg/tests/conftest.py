"""
Shared fixtures: seeded generators and random walk instances.
"""
import math

import numpy as np
import pytest

from app.walk.lattice import WalkerState, zero_state
from app.walk.operators import WalkParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_params(rng, lossy: bool = True, steps: int = 0) -> WalkParams:
    alpha, beta = rng.uniform(-math.pi, math.pi, size=2)
    if lossy:
        l1, l2 = rng.uniform(0.3, 1.0, size=2)
    else:
        l1 = l2 = 1.0
    return WalkParams(alpha=alpha, beta=beta, l1=l1, l2=l2, steps=steps)


def random_interior_state(rng, lattice_halfwidth: int, support: int) -> WalkerState:
    """Normalized random state supported on |x| <= support."""
    state = zero_state(lattice_halfwidth)
    grid = state.grid
    lo = lattice_halfwidth - support
    hi = lattice_halfwidth + support + 1
    grid[lo:hi] = rng.normal(size=(hi - lo, 2)) + 1j * rng.normal(size=(hi - lo, 2))
    return state.scaled(1.0 / np.linalg.norm(state.amplitudes))


@pytest.fixture
def make_params(rng):
    return lambda lossy=True, steps=0: random_params(rng, lossy, steps)


@pytest.fixture
def make_state(rng):
    return lambda lattice_halfwidth=10, support=6: random_interior_state(rng, lattice_halfwidth, support)
