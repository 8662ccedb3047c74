"""Top-level solver loop: spectral residual iteration with nonmonotone
double backtracking and optional sequential-secant acceleration.

Each iteration evaluates the residual along +-sigma F until the nonmonotone
test accepts a trial point; in accelerated mode one extra evaluation prices
the extrapolated candidate and the iterate with the smaller residual norm
wins (ties keep the trial point, which carries the line-search guarantee).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np

from .accel import SecantWindow, accel_point
from .core import (
    ISTOP_BREAKDOWN,
    ISTOP_BUDGET,
    ISTOP_CONVERGED,
    ISTOP_MAXIT,
    Array,
    CountedEvaluator,
    Problem,
    SolveReport,
    SolverConfig,
    as_vector,
)
from .linesearch import FWindow, double_backtracking
from .steps import EtaSchedule, SpectralState, sigma_k


@dataclass(frozen=True)
class IterationRecord:
    """Trace entry for one iteration (used by audits and regression tests)."""

    k: int
    sigma: float
    fbar: float
    eta: float
    alpha: float
    ls_evals: int
    f_current: float
    f_trial: float
    f_accel: float | None
    accepted: str
    f_next: float


def solve(problem: Problem, cfg: SolverConfig | None = None,
          x_start: Array | None = None,
          trace: list[IterationRecord] | None = None) -> SolveReport:
    """Solve F(x) = 0 from ``x_start`` (default: the problem's start point).

    Stops when ||F||_2 <= epsf (istop 0), at the iteration cap (istop 1),
    when a time or evaluation budget runs out (istop 2), or on numerical
    breakdown (istop 3, reporting the best iterate seen).  When ``trace`` is
    a list, one IterationRecord is appended per completed iteration.
    """
    cfg = SolverConfig() if cfg is None else cfg
    accelerated = cfg.mode == "accelerated"
    x = as_vector(problem.x0 if x_start is None else x_start, problem.n).copy()
    epsf = cfg.epsf if cfg.epsf is not None else 1e-6 * math.sqrt(problem.n)
    ev = CountedEvaluator(problem)
    start = time.perf_counter()

    def report(xv: Array, Fv: Array, fv: float, k: int, istop: int) -> SolveReport:
        return SolveReport(x=xv, res=Fv, normF=fv, iter=k, fcnt=ev.fcnt,
                           istop=istop, wall_seconds=time.perf_counter() - start)

    try:
        F, f = ev.evaluate(x)
    except Exception:
        return report(x, np.full(problem.n, math.nan), math.inf, 0, ISTOP_BREAKDOWN)

    best_x, best_F, best_f = x, F, f
    fwindow = FWindow(cfg.M)
    fwindow.push(f)
    spectral = SpectralState()
    window = SecantWindow(cfg.p) if accelerated else None
    schedule: EtaSchedule | None = None
    k = 0

    while True:
        norm_f = math.sqrt(f)
        if cfg.iprint >= 0:
            print(f"Iter:  {k}  f =  {f!r}")
        if norm_f <= epsf:
            istop = ISTOP_CONVERGED
            break
        if cfg.maxit is not None and k >= cfg.maxit:
            istop = ISTOP_MAXIT
            break
        if cfg.time_budget_seconds is not None and \
                time.perf_counter() - start > cfg.time_budget_seconds:
            istop = ISTOP_BUDGET
            break
        if cfg.max_feval is not None and ev.fcnt >= cfg.max_feval:
            istop = ISTOP_BUDGET
            break

        if schedule is None:
            schedule = EtaSchedule.from_initial_residual(norm_f)
        sigma = sigma_k(spectral, x, F, cfg)
        fbar = fwindow.barfk()
        eta = schedule.eta(k)

        try:
            ls = double_backtracking(ev, x, F, f, sigma, fbar, eta, cfg, k=k)
        except Exception:
            # BreakdownError from step underflow, or a failing evaluator.
            return report(best_x, best_F, best_f, k, ISTOP_BREAKDOWN)

        f_accel: float | None = None
        if accelerated:
            s_k = ls.x_trial - x
            y_k = ls.F_trial - F
            on_info = None
            if cfg.iprint >= 2:
                def on_info(m: int, r: int, nu_norm: float) -> None:
                    print(f"    accel: columns = {m}  rank = {r}  |nu| = {nu_norm!r}")
            x_accel = accel_point(window, s_k, y_k, ls.x_trial, ls.F_trial,
                                  on_info=on_info)
            try:
                F_accel, f_accel = ev.evaluate(x_accel)
            except Exception:
                return report(best_x, best_F, best_f, k, ISTOP_BREAKDOWN)
            if f_accel < ls.f_trial:
                x_new, F_new, f_new, accepted = x_accel, F_accel, f_accel, "accel"
            else:
                x_new, F_new, f_new, accepted = ls.x_trial, ls.F_trial, ls.f_trial, "trial"
            if cfg.iprint >= 2:
                print(f"    accel: accepted the {accepted} point")
            window.push_pair(x_new - x, F_new - F)
        else:
            x_new, F_new, f_new, accepted = ls.x_trial, ls.F_trial, ls.f_trial, "trial"

        if trace is not None:
            trace.append(IterationRecord(
                k=k, sigma=sigma, fbar=fbar, eta=eta, alpha=ls.alpha,
                ls_evals=ls.evals, f_current=f, f_trial=ls.f_trial,
                f_accel=f_accel, accepted=accepted, f_next=f_new))

        spectral.update(x, F)
        x, F, f = x_new, F_new, f_new
        if f < best_f:
            best_x, best_F, best_f = x, F, f
        fwindow.push(f)
        k += 1

    if cfg.iprint >= 0 and istop == ISTOP_CONVERGED:
        print("success!")
    return report(x, F, f, k, istop)


def solve_plain(problem: Problem, cfg: SolverConfig | None = None,
                x_start: Array | None = None,
                trace: list[IterationRecord] | None = None) -> SolveReport:
    """Run the iteration without the acceleration step (trial point always wins)."""
    cfg = SolverConfig(mode="plain") if cfg is None else cfg
    if cfg.mode != "plain":
        cfg = replace(cfg, mode="plain")
    return solve(problem, cfg, x_start, trace)
