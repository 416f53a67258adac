"""
Command-line front end: ``qwalk``.

Reads a flat ``key = value`` config file (``#`` starts a comment), applies
flag overrides, runs one command and writes CSV (plus optional SVG plots).
All angles are given in units of π: ``beta = 0.25`` means π/4.
"""
import argparse
import logging
import math
import sys
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from app.core.config import settings
from app.core.errors import ConfigError, GapClosed, WalkError
from app.core.logging import configure_logging
from app.services.emitters import emit_csv, emit_phase_plot, emit_plot, emit_pt_plot
from app.services.scan_engine import SweepResult, SweepRow, SweepSpec, diagram_to_result, run_sweep
from app.walk.lattice import Coin
from app.walk.momentum import PTTag
from app.walk.observables import Normalization
from app.walk.topology import gap_at, phase_diagram, winding_number

logger = logging.getLogger(__name__)


class Command(str, Enum):
    EVOLVE = "evolve"
    SWEEP = "sweep"
    PHASE_DIAGRAM = "phase-diagram"
    WINDING = "winding"
    PT_SCAN = "pt-scan"


def canonical_pi(value: float) -> float:
    """Angle in units of π mapped to [-1, 1)."""
    if -1.0 <= value < 1.0:
        return value
    wrapped = math.fmod(value + 1.0, 2.0)
    if wrapped < 0.0:
        wrapped += 2.0
    wrapped -= 1.0
    return -1.0 if wrapped >= 1.0 else wrapped


class RunConfig(BaseModel):
    """One CLI run; angles stored in units of π exactly as configured."""

    command: Command
    alpha: Optional[float] = None
    beta: List[float] = Field(default_factory=lambda: [0.25], min_length=1)
    alpha_start: float = -1.0
    alpha_stop: float = 1.0
    alpha_count: int = Field(default=settings.alpha_count, ge=1)
    beta_count: int = Field(default=64, ge=1)
    t: List[int] = Field(default_factory=lambda: [settings.default_steps], min_length=1)
    l1: float = Field(default=1.0, ge=0.0, le=1.0)
    l2: float = Field(default=1.0, ge=0.0, le=1.0)
    num_k: int = Field(default=settings.default_num_k, ge=2)
    coin: Coin = Coin.UP
    out: Optional[str] = None
    plot: bool = False
    normalization: Normalization = Normalization.POSTSELECT
    workers: int = Field(default=settings.sweep_max_workers, ge=1)

    @field_validator("alpha")
    @classmethod
    def _canonical_alpha(cls, value: Optional[float]) -> Optional[float]:
        return None if value is None else canonical_pi(value)

    @field_validator("beta")
    @classmethod
    def _canonical_beta(cls, values: List[float]) -> List[float]:
        return [canonical_pi(v) for v in values]

    @field_validator("t")
    @classmethod
    def _positive_t(cls, values: List[int]) -> List[int]:
        if any(t < 1 for t in values):
            raise ValueError("every t must be >= 1")
        return values

    @model_validator(mode="after")
    def _fill(self) -> "RunConfig":
        if self.out is None:
            self.out = f"qwalk_{self.command.value.replace('-', '_')}.csv"
        if self.command in (Command.EVOLVE, Command.WINDING) and self.alpha is None:
            raise ValueError(f"command '{self.command.value}' needs an alpha")
        if not (-1.0 <= self.alpha_start < self.alpha_stop <= 1.0):
            raise ValueError("alpha range must satisfy -1 <= alpha_start < alpha_stop <= 1")
        return self

    def to_sweep_spec(self) -> SweepSpec:
        """Radian-valued sweep spec for the sweep-like commands."""
        if self.alpha is not None:
            start, stop, count = self.alpha * math.pi, math.pi, 1
        else:
            start, stop, count = self.alpha_start * math.pi, self.alpha_stop * math.pi, self.alpha_count
        t_values = list(range(1, max(self.t) + 1)) if self.command is Command.EVOLVE else self.t
        return SweepSpec(
            alpha_start=start,
            alpha_stop=stop,
            alpha_count=count,
            beta_values=[b * math.pi for b in self.beta],
            t_values=t_values,
            l1=self.l1,
            l2=self.l2,
            num_k=self.num_k,
            initial_coin=self.coin,
            normalization=self.normalization,
            pt_only=self.command is Command.PT_SCAN,
            max_workers=self.workers,
        )

    def to_config_text(self) -> str:
        """Echo as a config document that parses back to an equal RunConfig."""
        lines = [f"command = {self.command.value}"]
        if self.alpha is not None:
            lines.append(f"alpha = {self.alpha!r}")
        lines += [
            f"beta = {', '.join(repr(b) for b in self.beta)}",
            f"alpha_start = {self.alpha_start!r}",
            f"alpha_stop = {self.alpha_stop!r}",
            f"alpha_count = {self.alpha_count}",
            f"beta_count = {self.beta_count}",
            f"t = {', '.join(str(t) for t in self.t)}",
            f"l1 = {self.l1!r}",
            f"l2 = {self.l2!r}",
            f"num_k = {self.num_k}",
            f"coin = {self.coin.value}",
            f"out = {self.out}",
            f"plot = {'true' if self.plot else 'false'}",
            f"normalization = {self.normalization.value}",
            f"workers = {self.workers}",
        ]
        return "\n".join(lines) + "\n"


def _float_list(text: str) -> List[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _int_list(text: str) -> List[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _boolean(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text}")


CONVERTERS = {
    "command": lambda s: Command(s.strip()),
    "alpha": float,
    "beta": _float_list,
    "alpha_start": float,
    "alpha_stop": float,
    "alpha_count": int,
    "beta_count": int,
    "t": _int_list,
    "l1": float,
    "l2": float,
    "num_k": int,
    "coin": Coin.parse,
    "out": str.strip,
    "plot": _boolean,
    "normalization": lambda s: Normalization(s.strip().lower()),
    "workers": int,
}


def _read_pairs(text: str) -> Dict[str, Tuple[str, int]]:
    pairs: Dict[str, Tuple[str, int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if key not in CONVERTERS:
            raise ConfigError(f"unknown key '{key}'", key=key, line=number)
        if key in pairs:
            raise ConfigError(f"duplicate key '{key}'", key=key, line=number)
        pairs[key] = (value, number)
    return pairs


def parse_config(text: str, overrides: Optional[Dict[str, Optional[str]]] = None) -> RunConfig:
    """
    Parse a config document plus flag overrides into a validated RunConfig.

    Args:
        text: ``key = value`` lines; blank lines and ``#`` comments ignored.
        overrides: Flag values keyed by config key; ``None`` means unset.

    Raises:
        ConfigError: unknown key, unparseable value or missing command,
            naming the key and (for file keys) the line.
    """
    pairs: Dict[str, Tuple[str, Optional[int]]] = dict(_read_pairs(text))
    for key, value in (overrides or {}).items():
        key = key.lower().replace("-", "_")
        if value is None:
            continue
        if key not in CONVERTERS:
            raise ConfigError(f"unknown key '{key}'", key=key)
        pairs[key] = (value, None)

    values = {}
    for key, (value, line) in pairs.items():
        try:
            values[key] = CONVERTERS[key](value)
        except ValueError:
            raise ConfigError(f"cannot parse value '{value}'", key=key, line=line) from None

    if "command" not in values:
        raise ConfigError("missing command", key="command")

    try:
        return RunConfig(**values)
    except ValidationError as e:
        first = e.errors()[0]
        key = str(first["loc"][0]) if first["loc"] else None
        line = pairs[key][1] if key in pairs else None
        raise ConfigError(first["msg"], key=key, line=line) from None


def _companion(out: Path, suffix: str) -> Path:
    return out.with_name(f"{out.stem}{suffix}.svg")


def _winding_row(config: RunConfig) -> SweepResult:
    alpha, beta = config.alpha * math.pi, config.beta[0] * math.pi
    gaps = gap_at(alpha, beta)
    try:
        result = winding_number(alpha, beta, config.num_k, settings.gap_tol, settings.winding_residual_max)
        value = result.value
        logger.info(f"W={value} (raw={result.raw_integral:.6f}, residual={result.residual:.2e})")
    except GapClosed as e:
        logger.info(f"Boundary point: {e}")
        value = None
    return SweepResult(rows=[SweepRow(
        alpha=alpha, beta=beta, t=None, l1=1.0, l2=1.0, D=None, S=None, surviving_norm=None,
        W=value, gap_zero=gaps.gap_zero, gap_pi=gaps.gap_pi, pt_phase=PTTag.UNBROKEN.value,
    )])


def run(config: RunConfig) -> SweepResult:
    """Execute one configured command and write its outputs."""
    out = Path(config.out)
    if config.command is Command.PHASE_DIAGRAM:
        alphas = np.linspace(config.alpha_start, config.alpha_stop, config.alpha_count, endpoint=False) * math.pi
        betas = np.linspace(-1.0, 1.0, config.beta_count, endpoint=False) * math.pi
        diagram = phase_diagram(alphas, betas, config.num_k, settings.gap_tol,
                                settings.winding_residual_max, config.workers,
                                boundary_margin=settings.boundary_margin)
        result = diagram_to_result(diagram)
        emit_csv(result, out)
        if config.plot:
            emit_phase_plot(diagram, out.with_suffix(".svg"))
        return result

    if config.command is Command.WINDING:
        result = _winding_row(config)
        emit_csv(result, out)
        return result

    result = run_sweep(config.to_sweep_spec())
    emit_csv(result, out)
    if config.plot:
        if config.command is Command.PT_SCAN:
            emit_pt_plot(result, out.with_suffix(".svg"))
        else:
            emit_plot(result, _companion(out, "_D"), column="D")
            emit_plot(result, _companion(out, "_S"), column="S")
    return result


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwalk",
        description="Split-step quantum walk: diffusion, entropy, winding and PT phases. Angles in units of π.",
    )
    parser.add_argument("--config", help="flat 'key = value' config file")
    parser.add_argument("--command", choices=[c.value for c in Command])
    parser.add_argument("--alpha", help="single α (units of π)")
    parser.add_argument("--beta", help="β value(s), comma-separated (units of π)")
    parser.add_argument("--t", help="step count(s), comma-separated")
    parser.add_argument("--l1")
    parser.add_argument("--l2")
    parser.add_argument("--num-k", dest="num_k")
    parser.add_argument("--coin", help="initial coin: up or down")
    parser.add_argument("--out", help="CSV output path")
    parser.add_argument("--plot", action="store_const", const="true", help="also write SVG plots")
    parser.add_argument("--normalization", help="postselect or raw")
    parser.add_argument("--alpha-count", dest="alpha_count")
    parser.add_argument("--workers")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        text = ""
        if args.config:
            try:
                text = Path(args.config).read_text(encoding="utf-8")
            except OSError as e:
                raise ConfigError(f"cannot read config file {args.config} ({e.strerror or e})") from None
        overrides = {key: value for key, value in vars(args).items() if key != "config"}
        config = parse_config(text, overrides)
        result = run(config)
    except WalkError as e:
        print(f"qwalk: error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.debug("Unexpected failure", exc_info=True)
        print(f"qwalk: error: unexpected failure: {e}", file=sys.stderr)
        return 1
    print(f"qwalk: {config.command.value}: wrote {len(result)} rows to {config.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
