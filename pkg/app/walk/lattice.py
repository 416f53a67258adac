"""
Walker state over a finite position lattice with a two-level coin.

Amplitudes are stored densely in one complex vector of length 2(2X+1),
ordered site-major: index = 2 * (x + X) + c with c = 0 for ↑ and 1 for ↓.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np
from numpy.typing import NDArray

from app.core.errors import OutOfLattice, ZeroNorm

ZERO_NORM_FLOOR = 1e-300


class Coin(str, Enum):
    """Internal two-level state of the walker."""

    UP = "up"
    DOWN = "down"

    @property
    def index(self) -> int:
        return 0 if self is Coin.UP else 1

    @classmethod
    def parse(cls, value: "str | Coin") -> "Coin":
        if isinstance(value, Coin):
            return value
        aliases = {"up": cls.UP, "↑": cls.UP, "u": cls.UP, "down": cls.DOWN, "↓": cls.DOWN, "d": cls.DOWN}
        try:
            return aliases[value.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown coin state '{value}' (expected up or down)") from None


@dataclass
class WalkerState:
    """Complex amplitudes over (position ⊗ coin)."""

    amplitudes: NDArray[np.complex128]
    lattice_halfwidth: int

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        expected = 2 * (2 * self.lattice_halfwidth + 1)
        if self.amplitudes.shape != (expected,):
            raise ValueError(
                f"amplitude vector must have shape ({expected},), got {self.amplitudes.shape}"
            )

    @property
    def num_sites(self) -> int:
        return 2 * self.lattice_halfwidth + 1

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(-self.lattice_halfwidth, self.lattice_halfwidth + 1)

    @property
    def grid(self) -> NDArray[np.complex128]:
        """(sites, 2) view sharing memory with ``amplitudes``."""
        return self.amplitudes.reshape(self.num_sites, 2)

    def index(self, position: int, coin: Coin) -> int:
        if abs(position) > self.lattice_halfwidth:
            raise OutOfLattice(
                f"position {position} outside lattice [-{self.lattice_halfwidth}, {self.lattice_halfwidth}]"
            )
        return 2 * (position + self.lattice_halfwidth) + Coin.parse(coin).index

    def amplitude(self, position: int, coin: Coin) -> complex:
        return complex(self.amplitudes[self.index(position, coin)])

    def copy(self) -> "WalkerState":
        return WalkerState(self.amplitudes.copy(), self.lattice_halfwidth)

    def scaled(self, factor: complex) -> "WalkerState":
        return WalkerState(self.amplitudes * factor, self.lattice_halfwidth)


@dataclass(frozen=True)
class ProbDist:
    """Position-indexed probabilities plus the norm they were taken from."""

    positions: NDArray[np.int64]
    probabilities: NDArray[np.float64]
    total_norm_before_normalization: float
    normalized: bool

    @property
    def entries(self) -> List[Tuple[int, float]]:
        return [(int(x), float(p)) for x, p in zip(self.positions, self.probabilities)]

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.probabilities))

    def as_dict(self, drop_zeros: bool = True) -> Dict[int, float]:
        return {x: p for x, p in self.entries if p != 0.0 or not drop_zeros}


def zero_state(lattice_halfwidth: int) -> WalkerState:
    """All-zero state on a lattice of 2X+1 sites."""
    if lattice_halfwidth < 1:
        raise OutOfLattice(f"lattice halfwidth must be positive, got {lattice_halfwidth}")
    return WalkerState(np.zeros(2 * (2 * lattice_halfwidth + 1), dtype=np.complex128), lattice_halfwidth)


def new_state(lattice_halfwidth: int, position: int = 0, coin: "Coin | str" = Coin.UP) -> WalkerState:
    """Localized state |position⟩ ⊗ |coin⟩."""
    state = zero_state(lattice_halfwidth)
    state.amplitudes[state.index(position, Coin.parse(coin))] = 1.0
    return state


def norm_sq(state: WalkerState) -> float:
    """Total squared norm over all sites and coins."""
    return float(np.vdot(state.amplitudes, state.amplitudes).real)


def probability_distribution(state: WalkerState, normalize: bool = True) -> ProbDist:
    """
    Position probabilities |a(x,↑)|² + |a(x,↓)|².

    Args:
        state: Walker state to measure.
        normalize: Divide by the current total norm (post-selection).

    Returns:
        ProbDist over every lattice site, recording the raw norm.
    """
    grid = state.grid
    probs = grid.real ** 2 + grid.imag ** 2
    probs = probs.sum(axis=1)
    total = float(probs.sum())
    if normalize:
        if total <= ZERO_NORM_FLOOR:
            raise ZeroNorm(f"cannot normalize a state with norm² = {total:.3e}")
        probs = probs / total
    return ProbDist(
        positions=state.positions,
        probabilities=probs,
        total_norm_before_normalization=total,
        normalized=normalize,
    )
