"""Derivative-free spectral residual solver for square nonlinear systems
F(x) = 0, with sequential-secant acceleration, a built-in problem suite,
and a benchmark harness with performance profiles."""

from .accel import SecantWindow, accel_point, min_norm_ls, orthogonalize_columns
from .bench import (
    BenchRecord,
    ProfileCurve,
    perf_profile,
    read_records_csv,
    records_to_matrix,
    run_suite,
    write_profile,
    write_records_csv,
)
from .core import (
    BreakdownError,
    CountedEvaluator,
    Problem,
    SolveReport,
    SolverConfig,
)
from .problems import available, make, suite_builtin
from .solver import IterationRecord, solve, solve_plain

__version__ = "0.1.0"

__all__ = [
    "BenchRecord",
    "BreakdownError",
    "CountedEvaluator",
    "IterationRecord",
    "Problem",
    "ProfileCurve",
    "SecantWindow",
    "SolveReport",
    "SolverConfig",
    "accel_point",
    "available",
    "make",
    "min_norm_ls",
    "orthogonalize_columns",
    "perf_profile",
    "read_records_csv",
    "records_to_matrix",
    "run_suite",
    "solve",
    "solve_plain",
    "suite_builtin",
    "write_profile",
    "write_records_csv",
    "__version__",
]
