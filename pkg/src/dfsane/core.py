"""Core types: problems, solver configuration, counted evaluation, reports."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

Array = np.ndarray
Residual = Callable[[Array], Array]

EPS_MACH = float(np.finfo(np.float64).eps)

ISTOP_CONVERGED = 0
ISTOP_MAXIT = 1
ISTOP_BUDGET = 2
ISTOP_BREAKDOWN = 3


class BreakdownError(RuntimeError):
    """The line search cannot take a representable step any more."""


def as_vector(x, n: int | None = None) -> Array:
    """Coerce ``x`` to a 1-D float64 array, optionally checking its length."""
    v = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise ValueError(f"expected a vector of length {n}, got {v.shape[0]}")
    return v


def norm2(v: Array) -> float:
    """Euclidean norm of ``v``."""
    return float(np.linalg.norm(v))


@dataclass(frozen=True, eq=False)
class Problem:
    """A square nonlinear system F(x) = 0 together with a start point.

    ``residual`` maps a length-``n`` vector to a length-``n`` vector and must
    be a pure function of its argument.
    """

    name: str
    n: int
    residual: Residual
    x0: Array

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("problem dimension must be a positive integer")
        object.__setattr__(self, "x0", as_vector(self.x0, self.n))


@dataclass(frozen=True)
class SolverConfig:
    """All algorithm parameters.

    ``nhlim`` equals p + 1 where p is the secant-window capacity in pairs.
    ``epsf`` is the convergence tolerance on ||F||_2; when left as None the
    solver uses 1e-6 * sqrt(n).  ``maxit`` / ``max_feval`` /
    ``time_budget_seconds`` are optional caps (absent means unbounded).
    ``iprint`` controls console output: -1 silent, 0 one line per iteration,
    1 adds line-search probes, 2 adds acceleration details.
    """

    gamma: float = 1e-4
    sigma_min: float = math.sqrt(EPS_MACH)
    sigma_max: float = 1.0 / math.sqrt(EPS_MACH)
    tau_min: float = 0.1
    tau_max: float = 0.5
    M: int = 10
    nhlim: int = 6
    epsf: float | None = None
    maxit: int | None = None
    max_feval: int | None = None
    time_budget_seconds: float | None = None
    mode: str = "accelerated"
    iprint: int = -1

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")
        if not 0.0 < self.sigma_min < self.sigma_max:
            raise ValueError("need 0 < sigma_min < sigma_max")
        if not 0.0 < self.tau_min < self.tau_max < 1.0:
            raise ValueError("need 0 < tau_min < tau_max < 1")
        if self.M < 1:
            raise ValueError("M must be a positive integer")
        if self.nhlim < 2:
            raise ValueError("nhlim must be at least 2")
        if self.epsf is not None and not self.epsf > 0.0:
            raise ValueError("epsf must be positive")
        if self.maxit is not None and self.maxit < 0:
            raise ValueError("maxit must be nonnegative")
        if self.max_feval is not None and self.max_feval < 1:
            raise ValueError("max_feval must be positive")
        if self.time_budget_seconds is not None and not self.time_budget_seconds > 0.0:
            raise ValueError("time_budget_seconds must be positive")
        if self.mode not in ("accelerated", "plain"):
            raise ValueError("mode must be 'accelerated' or 'plain'")
        if self.iprint not in (-1, 0, 1, 2):
            raise ValueError("iprint must be one of -1, 0, 1, 2")

    @property
    def p(self) -> int:
        """Secant-window capacity in (s, y) pairs."""
        return self.nhlim - 1


class CountedEvaluator:
    """Wraps a problem's residual and counts every evaluation.

    ``evaluate`` returns both F(x) and the merit value f = ||F(x)||_2^2; any
    non-finite residual component maps f to +inf so that downstream
    comparisons reject the point without special cases.
    """

    def __init__(self, problem: Problem):
        self.problem = problem
        self.fcnt = 0

    def evaluate(self, x: Array) -> tuple[Array, float]:
        self.fcnt += 1
        with np.errstate(all="ignore"):
            F = as_vector(self.problem.residual(x), self.problem.n)
        if np.isfinite(F).all():
            f = float(F @ F)
        else:
            f = math.inf
        return F, f

    __call__ = evaluate


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Terminal state of one solve.

    ``normF`` is f(x) = ||F(x)||_2^2 at the final iterate (the squared
    residual norm).  ``istop``: 0 converged, 1 iteration cap, 2 budget
    exhausted, 3 numerical breakdown.
    """

    x: Array
    res: Array
    normF: float
    iter: int
    fcnt: int
    istop: int
    wall_seconds: float

    @property
    def residual_norm(self) -> float:
        """||F(x)||_2 at the final iterate."""
        return math.sqrt(self.normF)

    def to_json_dict(self) -> dict:
        return {
            "x": [float(v) for v in self.x],
            "res": [float(v) for v in self.res],
            "normF": float(self.normF),
            "iter": int(self.iter),
            "fcnt": int(self.fcnt),
            "istop": int(self.istop),
            "wall_seconds": float(self.wall_seconds),
        }
