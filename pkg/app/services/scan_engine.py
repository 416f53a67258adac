"""
Parameter sweeps over (α, β, t, l1, l2) binding evolution, observables,
topology and PT classification into tabular rows.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, field_validator, model_validator

from app.core.config import settings
from app.core.errors import (
    DegenerateLoss,
    GapClosed,
    NonConvergent,
    UnclassifiableBrokenPhase,
    ZeroNorm,
)
from app.walk.lattice import Coin, new_state, norm_sq
from app.walk.momentum import PTTag, pt_phase_classify
from app.walk.observables import Normalization, observable_record
from app.walk.operators import WalkParams, canonical_angle, lattice_halfwidth_for, step
from app.walk.topology import PhaseDiagram, gap_at, winding_number

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "alpha", "beta", "t", "l1", "l2", "D", "S", "surviving_norm",
    "W", "gap_zero", "gap_pi", "pt_phase",
]


class SweepSpec(BaseModel):
    """Grid and physical parameters of one sweep (angles in radians)."""

    alpha_start: float = -math.pi
    alpha_stop: float = math.pi
    alpha_count: int = Field(default=settings.alpha_count, ge=1)
    beta_values: List[float] = Field(default_factory=lambda: [math.pi / 4], min_length=1)
    t_values: List[int] = Field(default_factory=lambda: [settings.default_steps], min_length=1)
    l1: float = Field(default=1.0, ge=0.0, le=1.0)
    l2: float = Field(default=1.0, ge=0.0, le=1.0)
    num_k: int = Field(default=settings.default_num_k, ge=2)
    initial_coin: Coin = Coin.UP
    normalization: Normalization = Normalization.POSTSELECT
    pt_only: bool = False
    max_workers: int = Field(default=settings.sweep_max_workers, ge=1)

    @field_validator("beta_values")
    @classmethod
    def _canonical_betas(cls, values: List[float]) -> List[float]:
        return [canonical_angle(float(v)) for v in values]

    @field_validator("t_values")
    @classmethod
    def _positive_steps(cls, values: List[int]) -> List[int]:
        if any(t < 1 for t in values):
            raise ValueError("all t values must be >= 1")
        return sorted(set(values))

    @model_validator(mode="after")
    def _alpha_range(self) -> "SweepSpec":
        slack = 1e-12
        if not (-math.pi - slack <= self.alpha_start <= math.pi + slack):
            raise ValueError(f"alpha_start {self.alpha_start} outside [-π, π]")
        if not (-math.pi - slack <= self.alpha_stop <= math.pi + slack):
            raise ValueError(f"alpha_stop {self.alpha_stop} outside [-π, π]")
        if self.alpha_count > 1 and self.alpha_stop <= self.alpha_start:
            raise ValueError("alpha_stop must be greater than alpha_start")
        return self

    @property
    def is_hermitian(self) -> bool:
        return self.l1 == 1.0 and self.l2 == 1.0

    def alpha_grid(self) -> np.ndarray:
        """alpha_count points from alpha_start, stop excluded."""
        if self.alpha_count == 1:
            return np.array([canonical_angle(self.alpha_start)])
        grid = np.linspace(self.alpha_start, self.alpha_stop, self.alpha_count, endpoint=False)
        return np.array([canonical_angle(float(a)) for a in grid])


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    beta: float
    t: Optional[int]
    l1: float
    l2: float
    D: Optional[float]
    S: Optional[float]
    surviving_norm: Optional[float]
    W: Optional[int]
    gap_zero: Optional[float]
    gap_pi: Optional[float]
    pt_phase: Optional[str]

    def sort_key(self) -> Tuple[float, float, int]:
        return (self.beta, self.alpha, -1 if self.t is None else self.t)


@dataclass
class SweepResult:
    rows: List[SweepRow] = field(default_factory=list)
    normalization: Normalization = Normalization.POSTSELECT

    def __len__(self) -> int:
        return len(self.rows)

    def to_frame(self) -> pd.DataFrame:
        """Rows as a DataFrame (angles in radians, missing values as NA)."""
        frame = pd.DataFrame([asdict(row) for row in self.rows], columns=CSV_COLUMNS)
        frame["t"] = frame["t"].astype("Int64")
        frame["W"] = frame["W"].astype("Int64")
        return frame

    def series(self, beta: float, t: int, column: str) -> Tuple[np.ndarray, np.ndarray]:
        """(α, column) for one (β, t) curve in row order."""
        picked = [r for r in self.rows if r.beta == beta and r.t == t]
        values = [getattr(r, column) for r in picked]
        return (
            np.array([r.alpha for r in picked]),
            np.array([np.nan if v is None else v for v in values], dtype=np.float64),
        )


def _topology_columns(alpha: float, beta: float, spec: SweepSpec):
    if not spec.is_hermitian:
        return None, None, None
    gaps = gap_at(alpha, beta)
    try:
        winding = winding_number(
            alpha, beta, spec.num_k, settings.gap_tol, settings.winding_residual_max
        ).value
    except GapClosed:
        winding = None
    except NonConvergent as e:
        logger.warning(f"Winding not converged, flagged NA: {e}")
        winding = None
    return winding, gaps.gap_zero, gaps.gap_pi


def _pt_column(params: WalkParams, num_k: int) -> Optional[str]:
    try:
        phase = pt_phase_classify(params, num_k, settings.pt_tol, settings.pt_snap_window)
    except (UnclassifiableBrokenPhase, DegenerateLoss) as e:
        logger.warning(f"PT phase flagged NA: {e}")
        return None
    return phase.tag.value


def _run_cell(spec: SweepSpec, alpha: float, beta: float) -> List[SweepRow]:
    max_t = max(spec.t_values)
    params = WalkParams(alpha=alpha, beta=beta, l1=spec.l1, l2=spec.l2, steps=max_t)
    winding, gap_zero, gap_pi = _topology_columns(params.alpha, params.beta, spec)
    pt_phase = PTTag.UNBROKEN.value if spec.is_hermitian else _pt_column(params, spec.num_k)

    common = dict(alpha=params.alpha, beta=params.beta, l1=spec.l1, l2=spec.l2,
                  W=winding, gap_zero=gap_zero, gap_pi=gap_pi, pt_phase=pt_phase)
    if spec.pt_only:
        return [SweepRow(t=None, D=None, S=None, surviving_norm=None, **common)]

    initial = new_state(lattice_halfwidth_for(max_t), 0, spec.initial_coin)
    wanted = set(spec.t_values)
    snapshots = {}
    current = initial
    for t in range(1, max_t + 1):
        current = step(current, params)
        if t in wanted:
            snapshots[t] = current

    rows = []
    for t in spec.t_values:
        try:
            surviving = norm_sq(snapshots[t])
            if surviving < settings.surviving_norm_floor:
                raise ZeroNorm(f"surviving norm {surviving:.3g} is below {settings.surviving_norm_floor:.0e}")
            record = observable_record(snapshots[t], t, spec.normalization)
            d, s, norm = record.D, record.entropy_bits, record.surviving_norm
        except ZeroNorm as e:
            logger.warning(f"Observables flagged NA at alpha={alpha:.6f}, beta={beta:.6f}, t={t}: {e}")
            d, s, norm = None, None, 0.0
        rows.append(SweepRow(t=t, D=d, S=s, surviving_norm=norm, **common))
    return rows


def run_sweep(spec: SweepSpec) -> SweepResult:
    """
    Evaluate every (α, β) cell of the sweep.

    Cells run on a bounded thread pool; per-cell numerical failures become
    NA entries instead of aborting. Rows are sorted by (β, α, t).
    """
    start_time = time.time()
    alphas = spec.alpha_grid()
    cells = [(float(a), float(b)) for b in spec.beta_values for a in alphas]
    logger.info(
        f"Sweep started: {len(cells)} cells, t={spec.t_values}, l=({spec.l1}, {spec.l2}), "
        f"normalization={spec.normalization.value}"
    )
    with ThreadPoolExecutor(max_workers=spec.max_workers) as executor:
        per_cell = list(executor.map(lambda ab: _run_cell(spec, *ab), cells))

    rows = sorted((row for cell_rows in per_cell for row in cell_rows), key=SweepRow.sort_key)
    elapsed = time.time() - start_time
    logger.info(f"Sweep finished in {elapsed:.2f}s: {len(rows)} rows")
    return SweepResult(rows=rows, normalization=spec.normalization)


def diagram_to_result(diagram: PhaseDiagram) -> SweepResult:
    """Flatten a phase diagram into lossless rows with only topology columns set."""
    rows = []
    for row in diagram.cells:
        for cell in row:
            rows.append(SweepRow(
                alpha=cell.alpha, beta=cell.beta, t=None, l1=1.0, l2=1.0,
                D=None, S=None, surviving_norm=None,
                W=None if cell.is_boundary else cell.winding.value,
                gap_zero=cell.gaps.gap_zero, gap_pi=cell.gaps.gap_pi,
                pt_phase=PTTag.UNBROKEN.value,
            ))
    return SweepResult(rows=sorted(rows, key=SweepRow.sort_key))
