"""Built-in nonlinear-system test problems and a name-based registry."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .core import Array, Problem


def expfun2(n: int = 3) -> Problem:
    """Exponential residual chain.

    F_1 = e^{x_1} - 1 and F_i = (i/10)(e^{x_i} + x_{i-1} - 1) for i >= 2,
    started from x0 = (1/n^2, ..., 1/n^2).  The origin is a root.  Note the
    exponential is applied to x_i in every component; an alternate statement
    seen in the literature writes e^{x_1} throughout, which is not what is
    implemented here.
    """
    if n < 2:
        raise ValueError("expfun2 needs n >= 2")
    coef = np.arange(2, n + 1) / 10.0

    def residual(x: Array) -> Array:
        F = np.empty_like(x)
        F[0] = np.exp(x[0]) - 1.0
        F[1:] = coef * (np.exp(x[1:]) + x[:-1] - 1.0)
        return F

    return Problem("expfun2", n, residual, np.full(n, 1.0 / n**2))


def booth() -> Problem:
    """Booth linear system x1 + 2 x2 = 7, 2 x1 + x2 = 5; root (1, 3)."""
    A = np.array([[1.0, 2.0], [2.0, 1.0]])
    b = np.array([7.0, 5.0])

    def residual(x: Array) -> Array:
        return A @ x - b

    return Problem("booth", 2, residual, np.zeros(2))


def linear_dense(n: int = 8) -> Problem:
    """Dense strictly diagonally dominant linear system with root (+1, -1, ...)."""
    i = np.arange(n)
    A = 1.0 / (1.0 + np.abs(i[:, None] - i[None, :]))
    A[i, i] = 4.0
    x_star = np.where(i % 2 == 0, 1.0, -1.0)
    b = A @ x_star

    def residual(x: Array) -> Array:
        return A @ x - b

    return Problem("linear-dense", n, residual, np.zeros(n))


def rosenbrock_ext(n: int = 10) -> Problem:
    """Extended Rosenbrock residual pairs; root at all ones, start (-1.2, 1, ...)."""
    if n < 2 or n % 2:
        raise ValueError("rosenbrock_ext needs even n >= 2")

    def residual(x: Array) -> Array:
        F = np.empty_like(x)
        F[0::2] = 10.0 * (x[1::2] - x[0::2] ** 2)
        F[1::2] = 1.0 - x[0::2]
        return F

    x0 = np.empty(n)
    x0[0::2] = -1.2
    x0[1::2] = 1.0
    return Problem("rosenbrock-ext", n, residual, x0)


def broyden_tridiagonal(n: int = 50) -> Problem:
    """Broyden tridiagonal system (3 - 2x_i) x_i - x_{i-1} - 2 x_{i+1} + 1 = 0."""
    if n < 2:
        raise ValueError("broyden_tridiagonal needs n >= 2")

    def residual(x: Array) -> Array:
        F = (3.0 - 2.0 * x) * x + 1.0
        F[1:] -= x[:-1]
        F[:-1] -= 2.0 * x[1:]
        return F

    return Problem("broyden-tri", n, residual, -np.ones(n))


def discrete_bvp(n: int = 50) -> Problem:
    """Discretized two-point boundary value residual
    2 x_i - x_{i-1} - x_{i+1} + (h^2 / 2)(x_i + t_i + 1)^3 with zero boundary."""
    if n < 2:
        raise ValueError("discrete_bvp needs n >= 2")
    h = 1.0 / (n + 1)
    t = h * np.arange(1, n + 1)

    def residual(x: Array) -> Array:
        F = 2.0 * x + 0.5 * h * h * (x + t + 1.0) ** 3
        F[1:] -= x[:-1]
        F[:-1] -= x[1:]
        return F

    return Problem("bvp", n, residual, t * (t - 1.0))


def powell_singular() -> Problem:
    """Powell's singular function as a 4-equation system; root at the origin.

    Started from (1, 2, 1, 1), where the two squared components have zero
    gradient, so the Jacobian has rank 2 at the start point.
    """
    s5 = math.sqrt(5.0)
    s10 = math.sqrt(10.0)

    def residual(x: Array) -> Array:
        return np.array([
            x[0] + 10.0 * x[1],
            s5 * (x[2] - x[3]),
            (x[1] - 2.0 * x[2]) ** 2,
            s10 * (x[0] - x[3]) ** 2,
        ])

    return Problem("powell-singular", 4, residual, np.array([1.0, 2.0, 1.0, 1.0]))


def trigexp(n: int = 50) -> Problem:
    """Trigonometric-exponential tridiagonal system; root at all ones."""
    if n < 2:
        raise ValueError("trigexp needs n >= 2")

    def residual(x: Array) -> Array:
        F = np.empty_like(x)
        F[0] = 3.0 * x[0] ** 3 + 2.0 * x[1] - 5.0 \
            + np.sin(x[0] - x[1]) * np.sin(x[0] + x[1])
        if n > 2:
            xl, xm, xr = x[:-2], x[1:-1], x[2:]
            F[1:-1] = -xl * np.exp(xl - xm) + xm * (4.0 + 3.0 * xm * xm) \
                + 2.0 * xr + np.sin(xm - xr) * np.sin(xm + xr) - 8.0
        F[-1] = -x[-2] * np.exp(x[-2] - x[-1]) + 4.0 * x[-1] - 3.0
        return F

    return Problem("trigexp", n, residual, np.zeros(n))


@dataclass(frozen=True)
class _Entry:
    factory: Callable[..., Problem]
    default_n: int
    parametric: bool


class ProblemRegistry:
    """Case-insensitive map from problem name to constructor."""

    def __init__(self):
        self._entries: dict[str, _Entry] = {}

    def register(self, name: str, factory: Callable[..., Problem],
                 default_n: int, parametric: bool) -> None:
        self._entries[name.lower()] = _Entry(factory, default_n, parametric)

    def names(self) -> list[str]:
        return sorted(self._entries)

    def default_n(self, name: str) -> int:
        return self._entry(name).default_n

    def _entry(self, name: str) -> _Entry:
        key = name.strip().lower()
        if key not in self._entries:
            known = ", ".join(self.names())
            raise KeyError(f"unknown problem {name!r} (known: {known})")
        return self._entries[key]

    def make(self, name: str, n: int | None = None) -> Problem:
        entry = self._entry(name)
        if entry.parametric:
            return entry.factory(n if n is not None else entry.default_n)
        problem = entry.factory()
        if n is not None and n != problem.n:
            raise ValueError(f"{name} has fixed dimension {problem.n}")
        return problem


REGISTRY = ProblemRegistry()
REGISTRY.register("expfun2", expfun2, default_n=3, parametric=True)
REGISTRY.register("booth", booth, default_n=2, parametric=False)
REGISTRY.register("linear-dense", linear_dense, default_n=8, parametric=True)
REGISTRY.register("rosenbrock-ext", rosenbrock_ext, default_n=10, parametric=True)
REGISTRY.register("broyden-tri", broyden_tridiagonal, default_n=50, parametric=True)
REGISTRY.register("bvp", discrete_bvp, default_n=50, parametric=True)
REGISTRY.register("powell-singular", powell_singular, default_n=4, parametric=False)
REGISTRY.register("trigexp", trigexp, default_n=50, parametric=True)


def make(name: str, n: int | None = None) -> Problem:
    """Construct a registered problem by name."""
    return REGISTRY.make(name, n)


def available() -> list[str]:
    """Names of all registered problems."""
    return REGISTRY.names()


def _named(problem: Problem, name: str) -> Problem:
    return replace(problem, name=name)


def suite_builtin() -> list[Problem]:
    """The desk-scale benchmark suite (10 problems)."""
    return [
        _named(expfun2(3), "expfun2-3"),
        _named(expfun2(100), "expfun2-100"),
        _named(expfun2(1000), "expfun2-1000"),
        booth(),
        linear_dense(8),
        _named(rosenbrock_ext(10), "rosenbrock-10"),
        _named(broyden_tridiagonal(50), "broyden-tri-50"),
        _named(discrete_bvp(50), "bvp-50"),
        powell_singular(),
        _named(trigexp(50), "trigexp-50"),
    ]


def load_linear_fixture(path) -> Problem:
    """Read a dense linear problem from a plain-text fixture.

    Format: first token n, then n rows of n+1 numbers (a row of A followed
    by the entry of b), then n numbers for the start point.  Tokens may be
    separated by any whitespace.
    """
    path = Path(path)
    tokens = path.read_text().split()
    if not tokens:
        raise ValueError(f"{path}: empty fixture")
    try:
        n = int(tokens[0])
    except ValueError as exc:
        raise ValueError(f"{path}: first token must be the dimension") from exc
    if n < 1:
        raise ValueError(f"{path}: dimension must be positive")
    need = 1 + n * (n + 1) + n
    if len(tokens) != need:
        raise ValueError(f"{path}: expected {need} numbers, found {len(tokens)}")
    values = np.array([float(t) for t in tokens[1:]])
    rows = values[: n * (n + 1)].reshape(n, n + 1)
    A = rows[:, :n].copy()
    b = rows[:, n].copy()
    x0 = values[n * (n + 1):].copy()

    def residual(x: Array) -> Array:
        return A @ x - b

    return Problem(path.stem, n, residual, x0)


def fixtures_from_dir(path) -> list[Problem]:
    """Load every ``*.txt`` linear fixture in a directory, sorted by name."""
    return [load_linear_fixture(p) for p in sorted(Path(path).glob("*.txt"))]
