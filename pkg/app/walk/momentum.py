"""
Momentum-space (Bloch) picture of the split-step walk.

By translation invariance the shift becomes T(k) = diag(e^{ik}, e^{-ik}),
so one step is the 2x2 matrix u(k) = L T(k) C(β) L' T(k) C(α). Eigenvalues
λ = e^{-iε + ε0} with e^{ε0} = l1 l2 give quasi-energies ε that are real in
the PT-unbroken phase.

The closed-form Hermitian dispersion and Bloch vector are written in a
frame where λ has the opposite sign and the momentum is k' = 2k + π;
``to_dispersion_frame`` converts a sample into that frame.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from app.core.errors import DegenerateLoss, GapClosed, UnclassifiableBrokenPhase
from app.walk.operators import WalkParams, canonical_angle, coin_matrix


class PTTag(str, Enum):
    UNBROKEN = "Unbroken"
    BROKEN_ZERO = "BrokenZero"
    BROKEN_PI = "BrokenPi"


@dataclass(frozen=True)
class MomentumSample:
    """Eigen-data of u(k) at one momentum."""

    k: float
    eigenvalues: Tuple[complex, complex]
    quasi_energies: Tuple[complex, complex]
    bloch: Optional[Tuple[float, float, float]] = None


@dataclass(frozen=True)
class PTPhase:
    """PT classification of one (α, β, l1, l2) point."""

    tag: PTTag
    max_modulus_split: float
    real_part: Optional[float] = None
    k_at_max_split: Optional[float] = None

    @property
    def is_broken(self) -> bool:
        return self.tag is not PTTag.UNBROKEN


def k_grid(num_k: int) -> NDArray[np.float64]:
    """Uniform grid k_j = -π + 2πj / num_k."""
    return -np.pi + 2.0 * np.pi * np.arange(num_k) / num_k


def _u_of_k_grid(params: WalkParams, ks: NDArray[np.float64]) -> NDArray[np.complex128]:
    n = ks.shape[0]
    shift = np.zeros((n, 2, 2), dtype=np.complex128)
    shift[:, 0, 0] = np.exp(1j * ks)
    shift[:, 1, 1] = np.exp(-1j * ks)
    loss = np.diag([params.l1, params.l2]).astype(np.complex128)
    loss_swapped = np.diag([params.l2, params.l1]).astype(np.complex128)
    first_half = shift @ coin_matrix(params.alpha)
    second_half = shift @ coin_matrix(params.beta)
    return loss @ second_half @ loss_swapped @ first_half


def u_of_k(params: WalkParams, k: float) -> NDArray[np.complex128]:
    """2x2 momentum-space step operator at k."""
    return _u_of_k_grid(params, np.array([k], dtype=np.float64))[0]


def _eigenvalues_2x2(mats: NDArray[np.complex128]) -> NDArray[np.complex128]:
    # roots of λ² - tr λ + det, larger root first to avoid cancellation
    tr = mats[:, 0, 0] + mats[:, 1, 1]
    det = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    disc = np.sqrt(tr * tr - 4.0 * det + 0j)
    plus = tr + disc
    minus = tr - disc
    big = np.where(np.abs(plus) >= np.abs(minus), plus, minus) / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(big != 0, det / big, 0.0)
    return np.stack([big, small], axis=1)


def _quasi_energies(eigenvalues: NDArray[np.complex128], loss_product: float) -> NDArray[np.complex128]:
    eps0 = math.log(loss_product)
    eps = 1j * (np.log(eigenvalues) - eps0)
    re = np.where(eps.real <= -np.pi, eps.real + 2.0 * np.pi, eps.real)
    return re + 1j * eps.imag


def _spectrum_arrays(
    params: WalkParams, ks: NDArray[np.float64]
) -> Tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    if params.loss_product <= 0.0:
        raise DegenerateLoss(f"quasi-energies need l1*l2 > 0 (got l1={params.l1}, l2={params.l2})")
    lam = _eigenvalues_2x2(_u_of_k_grid(params, ks))
    eps = _quasi_energies(lam, params.loss_product)
    # upper band (larger Re ε) first; ties broken by larger modulus
    re_gap = eps[:, 1].real - eps[:, 0].real
    mod_gap = np.abs(lam[:, 1]) - np.abs(lam[:, 0])
    swap = (re_gap > 1e-12) | ((np.abs(re_gap) <= 1e-12) & (mod_gap > 0))
    lam[swap] = lam[swap][:, ::-1]
    eps[swap] = eps[swap][:, ::-1]
    return lam, eps


def quasienergy_hermitian(alpha, beta, k):
    """
    Upper band of the lossless walk, cos ε = -sin α sin β + cos k cos α cos β.

    Accepts scalars or arrays; returns ε in [0, π].
    """
    rhs = -np.sin(alpha) * np.sin(beta) + np.cos(k) * np.cos(alpha) * np.cos(beta)
    eps = np.arccos(np.clip(rhs, -1.0, 1.0))
    return float(eps) if np.ndim(eps) == 0 else eps


def bloch_vectors(alpha: float, beta: float, ks: NDArray[np.float64], gap_tol: float = 1e-6) -> NDArray[np.float64]:
    """Bloch vectors on a k array, shape (len(ks), 3)."""
    cos_eps = -math.sin(alpha) * math.sin(beta) + np.cos(ks) * math.cos(alpha) * math.cos(beta)
    sin_eps = np.sqrt(np.clip(1.0 - cos_eps * cos_eps, 0.0, None))
    if np.any(sin_eps <= gap_tol):
        worst = float(ks[np.argmin(sin_eps)])
        raise GapClosed(f"gap closed at k={worst:.6f} for alpha={alpha:.6f}, beta={beta:.6f}")
    nx = np.sin(ks) * math.sin(alpha) * math.cos(beta)
    ny = math.cos(alpha) * math.sin(beta) + np.cos(ks) * math.sin(alpha) * math.cos(beta)
    nz = -np.sin(ks) * math.cos(alpha) * math.cos(beta)
    return np.stack([nx, ny, nz], axis=-1) / sin_eps[:, None]


def bloch_vector(alpha: float, beta: float, k: float, gap_tol: float = 1e-6) -> NDArray[np.float64]:
    """Unit Bloch vector n(k) of the lossless walk; raises GapClosed if sin ε(k) <= gap_tol."""
    return bloch_vectors(alpha, beta, np.array([k], dtype=np.float64), gap_tol)[0]


def dispersion_frame_momentum(k: float) -> float:
    return canonical_angle(2.0 * k + math.pi)


def to_dispersion_frame(sample: MomentumSample) -> Tuple[float, float]:
    """(k', ε') with ε' = π - ε_upper, comparable to ``quasienergy_hermitian(α, β, k')``."""
    upper = abs(sample.quasi_energies[0].real)
    return dispersion_frame_momentum(sample.k), math.pi - upper


def quasienergy_spectrum(params: WalkParams, num_k: int = 1024, gap_tol: float = 1e-6) -> List[MomentumSample]:
    """
    Diagonalize u(k) on the uniform grid and return samples ordered by k.

    Lossless samples also carry the Bloch vector at the matching
    dispersion-frame momentum (None where the gap closes there).
    """
    if num_k < 2:
        raise ValueError(f"num_k must be at least 2, got {num_k}")
    ks = k_grid(num_k)
    lam, eps = _spectrum_arrays(params, ks)
    samples = []
    for i, k in enumerate(ks):
        bloch = None
        if params.is_hermitian:
            try:
                n = bloch_vector(params.alpha, params.beta, dispersion_frame_momentum(float(k)), gap_tol)
                bloch = (float(n[0]), float(n[1]), float(n[2]))
            except GapClosed:
                bloch = None
        samples.append(MomentumSample(
            k=float(k),
            eigenvalues=(complex(lam[i, 0]), complex(lam[i, 1])),
            quasi_energies=(complex(eps[i, 0]), complex(eps[i, 1])),
            bloch=bloch,
        ))
    return samples


def modulus_split(params: WalkParams, num_k: int = 1024) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Per-k relative splitting ||λ1| - |λ2|| / (l1 l2) on the uniform grid."""
    ks = k_grid(num_k)
    lam, _ = _spectrum_arrays(params, ks)
    mods = np.abs(lam) / params.loss_product
    return ks, np.abs(mods[:, 0] - mods[:, 1])


def _circular_distance(a: float, b: float) -> float:
    d = math.fmod(abs(a - b), 2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def pt_phase_classify(
    params: WalkParams,
    num_k: int = 1024,
    tol: float = 1e-6,
    snap_window: float = 0.2,
) -> PTPhase:
    """
    Classify PT-unbroken vs broken from eigenvalue moduli.

    Unbroken iff every |λ| equals l1 l2 within ``tol`` (relative). Otherwise
    the real part of ε for the dominant eigenvalue at the k of maximal
    splitting is snapped to 0 or π.
    """
    ks = k_grid(num_k)
    lam, eps = _spectrum_arrays(params, ks)
    mods = np.abs(lam) / params.loss_product
    deviation = np.abs(mods - 1.0).max(axis=1)
    max_split = float(deviation.max())
    if max_split <= tol:
        return PTPhase(tag=PTTag.UNBROKEN, max_modulus_split=max_split)

    split = np.abs(mods[:, 0] - mods[:, 1])
    i = int(np.argmax(split))
    j = int(np.argmax(mods[i]))
    real_part = float(eps[i, j].real)
    to_zero = _circular_distance(real_part, 0.0)
    to_pi = _circular_distance(real_part, math.pi)
    if min(to_zero, to_pi) > snap_window:
        raise UnclassifiableBrokenPhase(
            f"broken-phase real part {real_part:.4f} is more than {snap_window} rad from 0 and π "
            f"(alpha={params.alpha:.6f}, beta={params.beta:.6f})"
        )
    tag = PTTag.BROKEN_ZERO if to_zero <= to_pi else PTTag.BROKEN_PI
    return PTPhase(tag=tag, max_modulus_split=max_split, real_part=real_part, k_at_max_split=float(ks[i]))
