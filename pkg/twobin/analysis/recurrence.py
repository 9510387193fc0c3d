"""
Branching-process recurrence for the backward search.

p_{i+1} = 1 - e^{-p_i s} (1 + p_i s), the probability that a complete binary
tree of depth i+1 embeds below a random bucket at average degree s. The step is
evaluated as the regularized lower incomplete gamma P(2, p s), which keeps full
precision when p s is tiny.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, List, Optional

import numpy as np
import pandas as pd
from scipy import optimize, special

from ..error_handling import AnalysisDomainError, BracketError, ReportWriteError

logger = logging.getLogger(__name__)

DEFAULT_TARGET = 1e-9
DEFAULT_MAX_ITERS = 10_000
STABILIZE_TOL = 1e-12
CONVERGE_CUTOFF = 1e-3
DEFAULT_GRID_POINTS = 100_000


class Termination(Enum):
    TARGET_REACHED = "target_reached"
    MAX_ITERS = "max_iters"
    CONVERGED_NONZERO = "converged_nonzero"


@dataclass
class RecurrenceTrace:
    s: float
    p: List[float] = field(default_factory=list)
    terminated_by: Termination = Termination.MAX_ITERS

    @property
    def iterations(self) -> int:
        return len(self.p) - 1

    @property
    def final(self) -> float:
        return self.p[-1]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"iteration": np.arange(len(self.p)), "p": self.p})


@dataclass(frozen=True)
class ScanResult:
    positive: bool
    argmin: float
    minimum: float


def _check_s(s: float):
    if not (s > 0 and math.isfinite(s)):
        raise AnalysisDomainError(f"s must be a positive real, got {s}")


def recurrence_step(p: float, s: float) -> float:
    """1 - e^{-ps}(1 + ps), clamped to [0, 1]"""
    if not 0.0 <= p <= 1.0:
        raise AnalysisDomainError(f"p must lie in [0, 1], got {p}")
    _check_s(s)
    return min(1.0, max(0.0, float(special.gammainc(2.0, p * s))))


def iterate_recurrence(s: float, p0: float = 1.0, target: float = DEFAULT_TARGET,
                       max_iters: int = DEFAULT_MAX_ITERS,
                       stabilize_tol: float = STABILIZE_TOL) -> RecurrenceTrace:
    """Iterate until p < target, p settles above target, or max_iters steps"""
    _check_s(s)
    trace = RecurrenceTrace(s=s, p=[float(p0)])
    p = float(p0)
    if p < target:
        trace.terminated_by = Termination.TARGET_REACHED
        return trace
    for _ in range(max_iters):
        nxt = recurrence_step(p, s)
        trace.p.append(nxt)
        if nxt < target:
            trace.terminated_by = Termination.TARGET_REACHED
            return trace
        if abs(nxt - p) < stabilize_tol * p:
            trace.terminated_by = Termination.CONVERGED_NONZERO
            return trace
        p = nxt
    trace.terminated_by = Termination.MAX_ITERS
    return trace


def converges_nonzero(s: float, iters: int = DEFAULT_MAX_ITERS, cutoff: float = CONVERGE_CUTOFF) -> bool:
    """True when p is still above cutoff after `iters` iterations from p0 = 1"""
    trace = iterate_recurrence(s, target=cutoff, max_iters=iters)
    return trace.terminated_by is not Termination.TARGET_REACHED


def decays(s: float, iters: int = DEFAULT_MAX_ITERS, cutoff: float = CONVERGE_CUTOFF) -> bool:
    return not converges_nonzero(s, iters, cutoff)


def iterations_to_reach(s: float, target: float, p0: float = 1.0,
                        max_iters: int = DEFAULT_MAX_ITERS) -> Optional[int]:
    """Steps until p drops below target, None if it never does"""
    trace = iterate_recurrence(s, p0=p0, target=target, max_iters=max_iters)
    if trace.terminated_by is Termination.TARGET_REACHED:
        return trace.iterations
    return None


def positivity_function(x: np.ndarray, s: float) -> np.ndarray:
    """f(x) = 1 + xs - e^{xs}(1 - x); zero exactly at fixed points of the step"""
    xs = x * s
    return 1.0 + xs - np.exp(xs) * (1.0 - x)


def positivity_scan(s: float, grid_points: int = DEFAULT_GRID_POINTS) -> ScanResult:
    """Check f > 0 on a uniform grid over (0, 1]"""
    _check_s(s)
    if grid_points < 1000:
        raise AnalysisDomainError(f"grid_points must be >= 1000, got {grid_points}")
    x = np.linspace(0.0, 1.0, grid_points + 1)[1:]
    f = positivity_function(x, s)
    i = int(np.argmin(f))
    return ScanResult(positive=bool(f[i] > 0), argmin=float(x[i]), minimum=float(f[i]))


def nonzero_fixed_point(s: float, grid_points: int = 10_000) -> float:
    """Largest fixed point of the step in (0, 1], or 0.0 if p = 0 is the only one"""
    _check_s(s)
    x = np.linspace(0.0, 1.0, grid_points + 1)[1:]
    gap = special.gammainc(2.0, x * s) - x
    above = np.flatnonzero(gap > 0)
    if above.size == 0:
        return 0.0
    i = int(above[-1])
    if i + 1 >= x.size:
        return 1.0
    return float(optimize.brentq(lambda p: special.gammainc(2.0, p * s) - p, x[i], x[i + 1]))


def threshold_bisect(lo: float = 3.0, hi: float = 4.0, tol: float = 1e-3,
                     predicate: Callable[[float], bool] = converges_nonzero) -> float:
    """Smallest s (within tol) at which the recurrence stops decaying to zero"""
    if not lo < hi:
        raise BracketError(f"need lo < hi, got [{lo}, {hi}]")
    if tol <= 0:
        raise BracketError(f"tol must be positive, got {tol}")
    if predicate(lo):
        raise BracketError(f"recurrence already converges nonzero at lo={lo}")
    if not predicate(hi):
        raise BracketError(f"recurrence still decays at hi={hi}")
    steps = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
        steps += 1
    threshold = 0.5 * (lo + hi)
    logger.debug(f"Bisection settled on s*={threshold:.6f} after {steps} steps")
    return threshold


def write_trace_csv(trace: RecurrenceTrace, path) -> Path:
    path = Path(path)
    try:
        trace.to_frame().to_csv(path, index=False)
    except OSError as e:
        raise ReportWriteError(path, e) from e
    return path
