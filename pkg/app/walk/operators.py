"""
Operator factors of the split-step walk U = L T C(β) L' T C(α).

Factors act right to left, so C(α) is applied first. Real-space actions
work on (sites, 2) views of the amplitude vector; ``dense_operator``
assembles the same product as an explicit matrix for cross-checks.
"""
import math
from typing import List

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.core.errors import LatticeOverflow, OutOfLattice
from app.walk.lattice import WalkerState


def canonical_angle(theta: float) -> float:
    """Map an angle in radians to [-π, π)."""
    if -math.pi <= theta < math.pi:
        return theta
    wrapped = math.fmod(theta + math.pi, 2.0 * math.pi)
    if wrapped < 0.0:
        wrapped += 2.0 * math.pi
    wrapped -= math.pi
    # fmod can land exactly on +π after the shift for inputs just below -π
    return -math.pi if wrapped >= math.pi else wrapped


class WalkParams(BaseModel):
    """Coin angles, loss factors and step count of one walk instance."""

    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float
    l1: float = Field(default=1.0, ge=0.0, le=1.0)
    l2: float = Field(default=1.0, ge=0.0, le=1.0)
    steps: int = Field(default=0, ge=0)

    @field_validator("alpha", "beta")
    @classmethod
    def _canonical(cls, value: float) -> float:
        return canonical_angle(float(value))

    @property
    def is_hermitian(self) -> bool:
        """True for the lossless (unitary) walk."""
        return self.l1 == 1.0 and self.l2 == 1.0

    @property
    def loss_product(self) -> float:
        return self.l1 * self.l2


def lattice_halfwidth_for(steps: int) -> int:
    """Each step shifts twice, so 2t sites on each side never overflow."""
    return max(2 * steps, 1)


def coin_matrix(theta: float) -> NDArray[np.float64]:
    """C(θ) = [[cos θ, sin θ], [sin θ, -cos θ]] (symmetric, orthogonal)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]], dtype=np.float64)


def _coin_inplace(grid: NDArray[np.complex128], theta: float) -> None:
    c, s = math.cos(theta), math.sin(theta)
    up = grid[:, 0].copy()
    down = grid[:, 1].copy()
    grid[:, 0] = c * up + s * down
    grid[:, 1] = s * up - c * down


def _shift(grid: NDArray[np.complex128]) -> NDArray[np.complex128]:
    if grid[-1, 0] != 0 or grid[0, 1] != 0:
        raise LatticeOverflow("amplitude on the outermost site would shift off the lattice")
    shifted = np.zeros_like(grid)
    shifted[1:, 0] = grid[:-1, 0]
    shifted[:-1, 1] = grid[1:, 1]
    return shifted


def _loss_inplace(grid: NDArray[np.complex128], l1: float, l2: float, swapped: bool) -> None:
    up_factor, down_factor = (l2, l1) if swapped else (l1, l2)
    grid[:, 0] *= up_factor
    grid[:, 1] *= down_factor


def apply_coin(state: WalkerState, theta: float) -> WalkerState:
    """Apply I ⊗ C(θ) at every site."""
    out = state.copy()
    _coin_inplace(out.grid, theta)
    return out


def apply_shift(state: WalkerState) -> WalkerState:
    """Move ↑ amplitude one site right and ↓ amplitude one site left."""
    shifted = _shift(state.grid)
    return WalkerState(shifted.reshape(-1), state.lattice_halfwidth)


def apply_loss(state: WalkerState, l1: float, l2: float, swapped: bool = False) -> WalkerState:
    """
    Apply L = I ⊗ diag(l1, l2), or L' = I ⊗ diag(l2, l1) when ``swapped``.
    """
    out = state.copy()
    _loss_inplace(out.grid, l1, l2, swapped)
    return out


def step(state: WalkerState, params: WalkParams) -> WalkerState:
    """One application of U: C(α), T, L', C(β), T, L in that order."""
    grid = state.grid.copy()
    _coin_inplace(grid, params.alpha)
    grid = _shift(grid)
    _loss_inplace(grid, params.l1, params.l2, swapped=True)
    _coin_inplace(grid, params.beta)
    grid = _shift(grid)
    _loss_inplace(grid, params.l1, params.l2, swapped=False)
    return WalkerState(grid.reshape(-1), state.lattice_halfwidth)


def evolve(initial: WalkerState, params: WalkParams) -> List[WalkerState]:
    """
    Trajectory [ψ, Uψ, ..., U^t ψ] of length t + 1.

    No renormalization happens between steps; lossy norms decay and are
    left for the measurement to handle.
    """
    if initial.lattice_halfwidth < 2 * params.steps:
        raise OutOfLattice(
            f"lattice halfwidth {initial.lattice_halfwidth} too small for {params.steps} steps "
            f"(need {2 * params.steps})"
        )
    trajectory = [initial]
    current = initial
    for _ in range(params.steps):
        current = step(current, params)
        trajectory.append(current)
    return trajectory


def dense_operator(params: WalkParams, lattice_halfwidth: int) -> NDArray[np.complex128]:
    """
    Explicit 2(2X+1) square matrix of U with edge truncation.

    Columns whose shift would leave the lattice lose that entry (zero rows
    off-lattice) instead of wrapping around.
    """
    if lattice_halfwidth < 2:
        raise OutOfLattice(f"dense operator needs a halfwidth of at least 2, got {lattice_halfwidth}")
    n_sites = 2 * lattice_halfwidth + 1
    identity = sp.identity(n_sites, format="csr")
    up_proj = sp.csr_matrix(np.diag([1.0, 0.0]))
    down_proj = sp.csr_matrix(np.diag([0.0, 1.0]))

    # |x+1><x| for ↑ and |x-1><x| for ↓
    shift = sp.kron(sp.eye(n_sites, k=-1), up_proj) + sp.kron(sp.eye(n_sites, k=1), down_proj)
    coin_alpha = sp.kron(identity, sp.csr_matrix(coin_matrix(params.alpha)))
    coin_beta = sp.kron(identity, sp.csr_matrix(coin_matrix(params.beta)))
    loss = sp.kron(identity, sp.csr_matrix(np.diag([params.l1, params.l2])))
    loss_swapped = sp.kron(identity, sp.csr_matrix(np.diag([params.l2, params.l1])))

    operator = loss @ shift @ coin_beta @ loss_swapped @ shift @ coin_alpha
    return operator.astype(np.complex128).toarray()
