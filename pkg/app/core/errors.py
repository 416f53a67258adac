"""
Error hierarchy for walk simulation, analysis and I/O.

Every error carries an ``exit_code`` used by the command-line front end:
2 for configuration problems, 3 for numerical failures, 4 for I/O.
"""
from typing import Optional


class WalkError(Exception):
    """Base class for all domain errors."""

    exit_code: int = 3


class OutOfLattice(WalkError):
    """A position or a requested walk length does not fit the lattice."""


class LatticeOverflow(WalkError):
    """A shift would move amplitude past the lattice edge."""


class ZeroNorm(WalkError):
    """Normalization requested on a (numerically) zero state."""


class NotNormalized(WalkError):
    """An operation that needs a normalized distribution got a raw one."""


class DivisionByZeroStep(WalkError):
    """Diffusion coefficient requested at t = 0."""


class InconsistentMoments(WalkError):
    """M2 - M1^2 came out clearly negative."""


class DegenerateLoss(WalkError):
    """Quasi-energies are undefined when l1 * l2 == 0."""


class GapClosed(WalkError):
    """The quasi-energy gap closes at 0 or π (within tolerance)."""


class NonConvergent(WalkError):
    """Winding quadrature did not land close enough to an integer."""


class UnclassifiableBrokenPhase(WalkError):
    """Broken-phase real part is far from both 0 and π."""


class NothingToPlot(WalkError):
    """The result has too few points for a meaningful figure."""


class ConfigError(WalkError):
    """Invalid run configuration, pointing at the offending key and line."""

    exit_code = 2

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        where = []
        if key is not None:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class OutputError(WalkError):
    """Writing an output file failed."""

    exit_code = 4

    def __init__(self, message: str, path: str):
        self.path = path
        super().__init__(f"{message}: {path}")
