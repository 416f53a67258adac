"""
Winding number, gap closures and phase diagrams of the lossless walk.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from app.core.errors import GapClosed, NonConvergent
from app.walk.momentum import bloch_vectors, k_grid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WindingResult:
    value: int
    raw_integral: float
    residual: float
    num_k_used: int


@dataclass(frozen=True)
class GapReport:
    """Smallest distance of the upper band from ε = 0 and from ε = π."""

    gap_zero: float
    gap_pi: float

    def is_open(self, gap_tol: float = 1e-6) -> bool:
        return self.gap_zero > gap_tol and self.gap_pi > gap_tol


@dataclass(frozen=True)
class PhaseCell:
    alpha: float
    beta: float
    gaps: GapReport
    winding: Optional[WindingResult]

    @property
    def is_boundary(self) -> bool:
        return self.winding is None


@dataclass(frozen=True)
class PhaseDiagram:
    """Cells indexed [row][column] = [β index][α index]."""

    alpha_grid: NDArray[np.float64]
    beta_grid: NDArray[np.float64]
    cells: List[List[PhaseCell]]

    def winding_values(self) -> NDArray[np.float64]:
        """W per cell, NaN on boundary cells."""
        return np.array([
            [np.nan if cell.is_boundary else cell.winding.value for cell in row]
            for row in self.cells
        ])

    def boundary_mask(self) -> NDArray[np.bool_]:
        return np.array([[cell.is_boundary for cell in row] for row in self.cells])


def gap_at(alpha: float, beta: float) -> GapReport:
    """
    Band-edge gaps from the closed-form dispersion.

    cos ε(k) is linear in cos k, so its extremes sit at k = 0 and k = π with
    values cos(α+β) and -cos(α-β).
    """
    at_zero = math.cos(alpha + beta)
    at_pi = -math.cos(alpha - beta)
    top = min(1.0, max(at_zero, at_pi))
    bottom = max(-1.0, min(at_zero, at_pi))
    return GapReport(gap_zero=math.acos(top), gap_pi=math.pi - math.acos(bottom))


def transition_distance(alpha: float, beta: float) -> float:
    """Distance in α (at fixed β) to the nearest line α ± β ≡ 0 or π (mod 2π)."""
    distances = []
    for s in (alpha + beta, alpha - beta):
        distances.append(abs(s - math.pi * round(s / math.pi)))
    return min(distances)


def on_transition_line(alpha: float, beta: float, margin: float = 0.05) -> bool:
    return transition_distance(alpha, beta) < margin


def winding_number(
    alpha: float,
    beta: float,
    num_k: int = 1024,
    gap_tol: float = 1e-6,
    residual_max: float = 0.01,
) -> WindingResult:
    """
    W = (1/2π) ∮ dk (n × ∂n/∂k)·Γ with Γ = (cos α, 0, sin α).

    ∂n/∂k uses a fourth-order central stencil on the periodic k-grid; the
    sum over the uniform grid is the midpoint rule.

    Raises:
        GapClosed: either gap is within ``gap_tol``.
        NonConvergent: the integral misses the nearest integer by
            ``residual_max`` or more.
    """
    gaps = gap_at(alpha, beta)
    if not gaps.is_open(gap_tol):
        raise GapClosed(
            f"gap closed at alpha={alpha:.6f}, beta={beta:.6f} "
            f"(gap_zero={gaps.gap_zero:.3e}, gap_pi={gaps.gap_pi:.3e})"
        )
    ks = k_grid(num_k)
    h = 2.0 * math.pi / num_k
    n = bloch_vectors(alpha, beta, ks, gap_tol)
    dn = (
        -np.roll(n, -2, axis=0) + 8.0 * np.roll(n, -1, axis=0)
        - 8.0 * np.roll(n, 1, axis=0) + np.roll(n, 2, axis=0)
    ) / (12.0 * h)
    gamma = np.array([math.cos(alpha), 0.0, math.sin(alpha)])
    integrand = np.cross(n, dn) @ gamma
    raw = float(integrand.mean())
    value = int(round(raw))
    residual = abs(raw - value)
    if residual >= residual_max:
        raise NonConvergent(
            f"winding integral {raw:.6f} not integral (residual {residual:.3e}) "
            f"at alpha={alpha:.6f}, beta={beta:.6f}, num_k={num_k}"
        )
    return WindingResult(value=value, raw_integral=raw, residual=residual, num_k_used=num_k)


def _check_grid(name: str, grid: Sequence[float]) -> NDArray[np.float64]:
    values = np.asarray(grid, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D grid")
    if values.size > 1 and not (np.all(np.diff(values) > 0) or np.all(np.diff(values) < 0)):
        raise ValueError(f"{name} must be strictly monotone")
    return values


def phase_diagram(
    alpha_grid: Sequence[float],
    beta_grid: Sequence[float],
    num_k: int = 1024,
    gap_tol: float = 1e-6,
    residual_max: float = 0.01,
    max_workers: int = 4,
    boundary_margin: float = 0.0,
) -> PhaseDiagram:
    """
    Winding number or boundary marker for every (α, β) cell.

    Cells are evaluated in parallel and returned row-major by (β, α) index.
    Cells closer than ``boundary_margin`` to a transition line are marked
    as boundary without integrating. A NonConvergent cell aborts the
    diagram with its coordinates attached.
    """
    alphas = _check_grid("alpha_grid", alpha_grid)
    betas = _check_grid("beta_grid", beta_grid)
    coords = [(r, c) for r in range(betas.size) for c in range(alphas.size)]

    def evaluate(rc):
        r, c = rc
        alpha, beta = float(alphas[c]), float(betas[r])
        gaps = gap_at(alpha, beta)
        if transition_distance(alpha, beta) < boundary_margin:
            return PhaseCell(alpha=alpha, beta=beta, gaps=gaps, winding=None)
        try:
            winding = winding_number(alpha, beta, num_k, gap_tol, residual_max)
        except GapClosed:
            winding = None
        except NonConvergent as e:
            raise NonConvergent(f"cell (row={r}, col={c}): {e}") from e
        return PhaseCell(alpha=alpha, beta=beta, gaps=gaps, winding=winding)

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        flat = list(executor.map(evaluate, coords))

    cells = [flat[r * alphas.size:(r + 1) * alphas.size] for r in range(betas.size)]
    boundary = sum(cell.is_boundary for cell in flat)
    logger.info(f"Phase diagram {betas.size}x{alphas.size} done, {boundary} boundary cells")
    return PhaseDiagram(alpha_grid=alphas, beta_grid=betas, cells=cells)
