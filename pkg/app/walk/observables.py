"""
Position moments, diffusion coefficient and Shannon entropy.

D = (M2 - M1²) / 2t and S = -Σ P log2 P. The strict functions require a
normalized distribution; the ``raw_*`` variants evaluate the same formulas
on the unnormalized distribution of a lossy walk.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import entr
from scipy.stats import spearmanr

from app.core.errors import DivisionByZeroStep, InconsistentMoments, NotNormalized
from app.walk.lattice import ProbDist, WalkerState, norm_sq, probability_distribution

VARIANCE_ROUNDING = 1e-12


class Normalization(str, Enum):
    """How lossy distributions are reported at measurement time."""

    POSTSELECT = "postselect"
    RAW = "raw"


@dataclass(frozen=True)
class ObservableRecord:
    t: int
    M1: float
    M2: float
    variance: float
    D: Optional[float]
    entropy_bits: float
    surviving_norm: float


def _require_normalized(dist: ProbDist) -> None:
    if not dist.normalized:
        raise NotNormalized("distribution must be normalized (use the raw_* variants otherwise)")


def raw_moments(dist: ProbDist) -> Tuple[float, float]:
    """Σ n P and Σ n² P without any normalization check."""
    n = dist.positions.astype(np.float64)
    p = dist.probabilities
    return float(n @ p), float((n * n) @ p)


def moments(dist: ProbDist) -> Tuple[float, float]:
    """First and second position moments of a normalized distribution."""
    _require_normalized(dist)
    return raw_moments(dist)


def _variance(m1: float, m2: float) -> float:
    variance = m2 - m1 * m1
    if variance < 0.0:
        # rounding scales with the size of M2
        if variance >= -VARIANCE_ROUNDING * max(1.0, m2):
            return 0.0
        raise InconsistentMoments(f"negative variance {variance:.3e} (M1={m1}, M2={m2})")
    return variance


def _check_step(t: int) -> None:
    if t == 0:
        raise DivisionByZeroStep("diffusion coefficient is undefined at t = 0")
    if t < 0:
        raise ValueError(f"step count must be positive, got {t}")


def diffusion_coefficient(dist: ProbDist, t: int) -> float:
    """(M2 - M1²) / 2t, clamped at 0 against rounding."""
    _check_step(t)
    m1, m2 = moments(dist)
    return _variance(m1, m2) / (2.0 * t)


def raw_diffusion_coefficient(dist: ProbDist, t: int) -> float:
    _check_step(t)
    m1, m2 = raw_moments(dist)
    return _variance(m1, m2) / (2.0 * t)


def raw_shannon_entropy(dist: ProbDist) -> float:
    """-Σ P log2 P with 0·log 0 = 0, no normalization check."""
    return float(entr(dist.probabilities).sum() / math.log(2.0))


def shannon_entropy(dist: ProbDist) -> float:
    """Base-2 Shannon entropy of a normalized distribution."""
    _require_normalized(dist)
    return raw_shannon_entropy(dist)


def observable_record(
    state: WalkerState,
    t: int,
    normalization: Normalization = Normalization.POSTSELECT,
) -> ObservableRecord:
    """Moments, D (None at t = 0), S and surviving norm of one state."""
    surviving = norm_sq(state)
    if normalization is Normalization.POSTSELECT:
        dist = probability_distribution(state, normalize=True)
    else:
        dist = probability_distribution(state, normalize=False)
    m1, m2 = raw_moments(dist)
    variance = _variance(m1, m2)
    return ObservableRecord(
        t=t,
        M1=m1,
        M2=m2,
        variance=variance,
        D=variance / (2.0 * t) if t >= 1 else None,
        entropy_bits=raw_shannon_entropy(dist),
        surviving_norm=surviving,
    )


def observable_series(
    trajectory: Sequence[WalkerState],
    normalization: Normalization = Normalization.POSTSELECT,
) -> List[ObservableRecord]:
    """One record per trajectory element; element i is time t = i."""
    if not trajectory:
        raise ValueError("trajectory must contain at least the initial state")
    return [observable_record(state, t, normalization) for t, state in enumerate(trajectory)]


def rank_correlation(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation of two equally long columns."""
    rho, _ = spearmanr(np.asarray(xs, dtype=np.float64), np.asarray(ys, dtype=np.float64))
    return float(rho)
