"""Tests for the core types: counted evaluation, configuration, reports."""

import math

import numpy as np
import pytest

from dfsane.core import (
    EPS_MACH,
    CountedEvaluator,
    Problem,
    SolverConfig,
    as_vector,
    norm2,
)
from dfsane.problems import expfun2


def identity_problem(n=2):
    return Problem("id", n, lambda x: x.copy(), np.zeros(n))


def test_eval_counted_identity():
    ev = CountedEvaluator(identity_problem())
    F, f = ev.evaluate(np.array([3.0, 4.0]))
    np.testing.assert_array_equal(F, [3.0, 4.0])
    assert f == 25.0
    assert ev.fcnt == 1


def test_eval_counted_at_root():
    p = Problem("shift", 2, lambda x: x - 1.0, np.zeros(2))
    ev = CountedEvaluator(p)
    F, f = ev.evaluate(np.array([1.0, 1.0]))
    np.testing.assert_array_equal(F, [0.0, 0.0])
    assert f == 0.0


def test_eval_counted_expfun2_start():
    # Reference merit value at the standard start point of the n=3 chain.
    p = expfun2(3)
    ev = CountedEvaluator(p)
    _, f = ev.evaluate(p.x0)
    assert abs(f - 0.02060606) <= 1e-7


def test_fcnt_increments_once_per_call():
    ev = CountedEvaluator(identity_problem())
    for k in range(1, 6):
        ev.evaluate(np.zeros(2))
        assert ev.fcnt == k


@pytest.mark.parametrize("bad", [
    [1.0, math.inf],
    [math.nan, 0.0],
    [-math.inf, 2.0],
])
def test_nonfinite_residual_maps_to_plus_inf(bad):
    p = Problem("bad", 2, lambda x: np.array(bad), np.zeros(2))
    ev = CountedEvaluator(p)
    _, f = ev.evaluate(np.zeros(2))
    assert f == math.inf and f > 0  # usable in comparisons, never NaN


def test_f_agrees_with_norm_squared():
    rng = np.random.default_rng(42)
    for _ in range(50):
        n = int(rng.integers(1, 40))
        v = rng.standard_normal(n) * 10.0 ** rng.integers(-3, 4)
        p = Problem("v", n, lambda x, v=v: v.copy(), np.zeros(n))
        _, f = CountedEvaluator(p).evaluate(np.zeros(n))
        expected = norm2(v) ** 2
        assert abs(f - expected) <= 4.0 * EPS_MACH * n * max(expected, 1e-300)


def test_as_vector_checks_shape():
    with pytest.raises(ValueError):
        as_vector(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        as_vector([1.0, 2.0], n=3)


def test_problem_rejects_bad_inputs():
    with pytest.raises(ValueError):
        Problem("p", 0, lambda x: x, np.zeros(0))
    with pytest.raises(ValueError):
        Problem("p", 3, lambda x: x, np.zeros(2))


def test_config_defaults():
    cfg = SolverConfig()
    assert cfg.gamma == 1e-4
    assert cfg.tau_min == 0.1 and cfg.tau_max == 0.5
    assert cfg.M == 10
    assert cfg.sigma_min == math.sqrt(EPS_MACH)
    assert cfg.sigma_max == 1.0 / math.sqrt(EPS_MACH)
    assert cfg.nhlim == 6 and cfg.p == 5
    assert cfg.epsf is None and cfg.maxit is None
    assert cfg.mode == "accelerated" and cfg.iprint == -1


@pytest.mark.parametrize("kwargs", [
    {"gamma": 0.0},
    {"gamma": 1.0},
    {"sigma_min": 2.0, "sigma_max": 1.0},
    {"sigma_min": 0.0},
    {"tau_min": 0.5, "tau_max": 0.1},
    {"tau_max": 1.0},
    {"M": 0},
    {"nhlim": 1},
    {"epsf": -1e-6},
    {"maxit": -1},
    {"max_feval": 0},
    {"time_budget_seconds": 0.0},
    {"mode": "fast"},
    {"iprint": 3},
])
def test_config_rejects_invalid(kwargs):
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


def test_report_json_dict_is_stable_keyed():
    from dfsane.core import SolveReport
    rep = SolveReport(x=np.array([1.0]), res=np.array([0.0]), normF=0.0,
                      iter=3, fcnt=7, istop=0, wall_seconds=0.01)
    d = rep.to_json_dict()
    assert list(d) == ["x", "res", "normF", "iter", "fcnt", "istop", "wall_seconds"]
    assert d["iter"] == 3 and d["fcnt"] == 7 and d["istop"] == 0
