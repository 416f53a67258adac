"""
CSV and SVG emission for sweep results and phase diagrams.

Angles leave the program in units of π. CSV is the authoritative output;
plots are derived views of the same rows.
"""
import logging
import math
from pathlib import Path
from typing import List, Optional, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402
from matplotlib.ticker import FuncFormatter, MultipleLocator  # noqa: E402

from app.core.errors import NothingToPlot, OutputError  # noqa: E402
from app.services.scan_engine import CSV_COLUMNS, SweepResult  # noqa: E402
from app.walk.topology import PhaseDiagram  # noqa: E402

logger = logging.getLogger(__name__)

NA_TOKEN = "NA"
FLOAT_FORMAT = "%.12g"
NUMERIC_COLUMNS = ["alpha", "beta", "l1", "l2", "D", "S", "surviving_norm", "gap_zero", "gap_pi"]

plt.rcParams["svg.hashsalt"] = "qwalk-diffusion"


def _result_frame(result: SweepResult) -> pd.DataFrame:
    frame = result.to_frame()
    for column in NUMERIC_COLUMNS:
        frame[column] = pd.to_numeric(frame[column], errors="coerce").astype(np.float64)
    frame["alpha"] = frame["alpha"] / math.pi
    frame["beta"] = frame["beta"] / math.pi
    return frame[CSV_COLUMNS]


def render_csv(result: SweepResult) -> str:
    """CSV text: fixed header, 12 significant digits, NA for missing cells."""
    return _result_frame(result).to_csv(
        index=False, float_format=FLOAT_FORMAT, na_rep=NA_TOKEN, lineterminator="\n"
    )


def _ensure_parent(path: Path) -> None:
    if not path.parent.exists():
        raise OutputError("output directory does not exist", str(path))


def emit_csv(result: SweepResult, path: "str | Path") -> Path:
    """Write ``result`` as UTF-8 CSV with '\\n' line endings."""
    path = Path(path)
    _ensure_parent(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(render_csv(result))
    except OSError as e:
        raise OutputError(f"could not write CSV ({e.strerror or e})", str(path)) from e
    logger.info(f"Wrote {len(result)} rows to {path}")
    return path


def format_pi(value: float, _pos: Optional[int] = None) -> str:
    """Tick label for a value given in units of π, e.g. 0.75 -> '3π/4'."""
    quarters = int(round(value * 4))
    if abs(value * 4 - quarters) > 1e-9:
        return f"{value:g}π"
    if quarters == 0:
        return "0"
    num, den = quarters, 4
    g = math.gcd(abs(num), den)
    num, den = num // g, den // g
    sign = "-" if num < 0 else ""
    head = "π" if abs(num) == 1 else f"{abs(num)}π"
    return f"{sign}{head}" if den == 1 else f"{sign}{head}/{den}"


def _save(fig, path: Path) -> Path:
    _ensure_parent(path)
    try:
        fig.savefig(path, format="svg", bbox_inches="tight", metadata={"Date": None})
    except OSError as e:
        raise OutputError(f"could not write plot ({e.strerror or e})", str(path)) from e
    finally:
        plt.close(fig)
    logger.info(f"Wrote plot to {path}")
    return path


def _alpha_series(result: SweepResult, column: str) -> List[Tuple[float, int, np.ndarray, np.ndarray]]:
    keys = sorted({(r.beta, r.t) for r in result.rows if r.t is not None})
    series = []
    for beta, t in keys:
        alphas, values = result.series(beta, t, column)
        if alphas.size >= 2:
            series.append((beta, t, alphas, values))
    return series


def emit_plot(result: SweepResult, path: "str | Path", column: str = "D") -> Path:
    """
    Line plot of ``column`` (D or S) against α, one polyline per (β, t).

    A result holding a single (α, β) with several t is drawn against t
    instead. Anything with fewer than two points per curve is refused.
    """
    if column not in ("D", "S"):
        raise ValueError(f"column must be 'D' or 'S', got {column}")
    path = Path(path)
    series = _alpha_series(result, column)
    label = "diffusion coefficient D" if column == "D" else "Shannon entropy S (bits)"

    if series:
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for beta, t, alphas, values in series:
            ax.plot(alphas / math.pi, values, label=f"β={format_pi(beta / math.pi)}, t={t}")
        ax.xaxis.set_major_locator(MultipleLocator(0.25))
        ax.xaxis.set_major_formatter(FuncFormatter(format_pi))
        ax.set_xlabel("α")
        ax.set_ylabel(label)
        ax.legend(fontsize="small")
        return _save(fig, path)

    points = [r for r in result.rows if r.t is not None]
    if len({(r.alpha, r.beta) for r in points}) == 1 and len(points) >= 2:
        ts = np.array([r.t for r in points])
        values = np.array([np.nan if getattr(r, column) is None else getattr(r, column) for r in points])
        fig, ax = plt.subplots(figsize=(7, 4.5))
        ax.plot(ts, values, marker="o")
        ax.set_xlabel("t")
        ax.set_ylabel(label)
        return _save(fig, path)

    raise NothingToPlot(
        f"nothing to plot: need at least two points per curve, got {len(result)} row(s)"
    )


def emit_phase_plot(diagram: PhaseDiagram, path: "str | Path") -> Path:
    """Colored (α, β) cell grid of W with boundary cells in a separate color."""
    path = Path(path)
    values = diagram.winding_values()
    if values.size < 2:
        raise NothingToPlot("nothing to plot: phase diagram has a single cell")
    # W in {-1, 0, 1}; boundary cells are masked and drawn with the 'bad' color
    cmap = ListedColormap(["#3b6fb6", "#f2f2f2", "#e0a030"])
    cmap.set_bad("#b2182b")
    masked = np.ma.masked_invalid(values)

    a = diagram.alpha_grid / math.pi
    b = diagram.beta_grid / math.pi
    fig, ax = plt.subplots(figsize=(6, 5.5))
    mesh = ax.pcolormesh(_edges(a), _edges(b), masked, cmap=cmap, vmin=-1.5, vmax=1.5, shading="flat")
    cbar = fig.colorbar(mesh, ax=ax, ticks=[-1, 0, 1])
    cbar.set_label("winding number W (boundary cells in red)")
    for axis in (ax.xaxis, ax.yaxis):
        axis.set_major_locator(MultipleLocator(0.25 if a.size > 1 else 1.0))
        axis.set_major_formatter(FuncFormatter(format_pi))
    ax.set_xlabel("α")
    ax.set_ylabel("β")
    return _save(fig, path)


def _edges(centers: np.ndarray) -> np.ndarray:
    if centers.size == 1:
        return np.array([centers[0] - 0.5, centers[0] + 0.5])
    mids = (centers[:-1] + centers[1:]) / 2.0
    return np.concatenate([[2 * centers[0] - mids[0]], mids, [2 * centers[-1] - mids[-1]]])


def emit_pt_plot(result: SweepResult, path: "str | Path") -> Path:
    """PT tag strip per β along α (unbroken, broken at 0, broken at π, NA)."""
    path = Path(path)
    if len(result) < 2:
        raise NothingToPlot(f"nothing to plot: need at least two points, got {len(result)} row(s)")
    colors = {"Unbroken": "#d9d9d9", "BrokenZero": "#3b6fb6", "BrokenPi": "#b2182b", None: "#000000"}
    fig, ax = plt.subplots(figsize=(7, 2 + 0.4 * len({r.beta for r in result.rows})))
    for tag, color in colors.items():
        picked = [r for r in result.rows if r.pt_phase == tag]
        if picked:
            ax.scatter([r.alpha / math.pi for r in picked], [r.beta / math.pi for r in picked],
                       c=color, s=12, marker="s", label=tag or NA_TOKEN)
    ax.xaxis.set_major_locator(MultipleLocator(0.25))
    for axis in (ax.xaxis, ax.yaxis):
        axis.set_major_formatter(FuncFormatter(format_pi))
    ax.set_xlabel("α")
    ax.set_ylabel("β")
    ax.legend(fontsize="small", loc="upper right")
    return _save(fig, path)
