import numpy as np
import pytest
from scipy.stats import binomtest

from ideaopt.harness import (child_rng, performance_curve, required_sample_size, run_benchmark,
                             run_many, successes, summarize, to_csv, wilson_interval)
from ideaopt.problems import get_problem
from ideaopt.records import Evaluator, report_from


def always_best(problem, budget, rng):
    ev = Evaluator(problem.unit_batch, problem.d, budget)
    ev(problem.domain.normalize(problem.x_best)[None, :])
    return report_from(ev, "oracle", problem)


def uniform_search(problem, budget, rng):
    ev = Evaluator(problem.unit_batch, problem.d, budget)
    ev(rng.random((budget, problem.d)))
    return report_from(ev, "uniform", problem)


def test_reporting_the_best_point_always_succeeds():
    p = get_problem("cassini1")
    stats, _ = run_benchmark(always_best, p, 10, 100, seed=0, f_ref=p.objective(p.x_best))
    assert stats.j_s == 10 and stats.p_s == 1.0


def test_uniform_sampling_never_hits_cassini1():
    p = get_problem("cassini1")
    f_ref = p.objective(p.x_best)
    stats, reports = run_benchmark(uniform_search, p, 50, 1000, seed=1, f_ref=f_ref)
    assert stats.j_s == 0
    assert all(r.evaluations == 1000 for r in reports)


def test_success_count_by_hand():
    values = [0.0, 0.05, 0.1, 0.0999, 0.2, -0.05, np.inf, np.nan] * 2 + [0.01] * 4
    # |0 - f| < 0.1 holds for 0, 0.05, 0.0999, -0.05 in each copy, plus the four 0.01s
    assert successes(values, 0.0, 0.1).sum() == 12


def test_sample_sizes():
    assert required_sample_size(0.05, 0.05) == 385
    assert required_sample_size(0.1, 0.05) == 97
    assert required_sample_size(0.99, 0.99) == 1
    with pytest.raises(ValueError):
        required_sample_size(0.0, 0.05)


def test_wilson_interval_against_scipy():
    for j, n in [(0, 20), (7, 20), (20, 20), (180, 385)]:
        ci = binomtest(j, n).proportion_ci(0.95, method="wilson")
        assert wilson_interval(j, n) == pytest.approx((ci.low, ci.high), abs=1e-12)
    with pytest.raises(ValueError):
        wilson_interval(0, 0)


def test_zero_runs_is_an_error():
    with pytest.raises(ValueError):
        run_many("de", get_problem("paraboloid:2"), 0, 100, 0)


def test_missing_reference_value():
    p = get_problem("paraboloid:2")
    p.f_best = None
    with pytest.raises(ValueError):
        run_benchmark("de", p, 2, 100, 0)


def test_child_streams_are_reproducible_and_distinct():
    a, b = child_rng(3, 0).random(4), child_rng(3, 0).random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, child_rng(3, 1).random(4))
    assert not np.array_equal(a, child_rng(4, 0).random(4))


def test_runs_are_independent_of_worker_count():
    p = get_problem("rastrigin:2")
    serial = run_many("idea", p, 3, 2000, 5)
    parallel = run_many("idea", p, 3, 2000, 5, jobs=2)
    assert [r.best_f for r in serial] == [r.best_f for r in parallel]


def test_performance_curve_on_the_paraboloid():
    p = get_problem("paraboloid:3")
    curve = performance_curve("idea", p, [40, 400, 4000], 10, 0, tol_f=1e-4)
    rates = [s.p_s for s in curve]
    assert rates == sorted(rates) and rates[-1] == 1.0
    with pytest.raises(ValueError):
        performance_curve("idea", p, [400, 40], 2, 0)


def test_csv_leaves_time_blank_by_default():
    p = get_problem("paraboloid:2")
    stats, _ = run_benchmark("de", p, 2, 200, 0, tol_f=1.0)
    lines = to_csv([stats]).splitlines()
    assert lines[0] == "algorithm,problem,seed,N,n,j_s,p_s,ci_low,ci_high,wall_seconds"
    assert lines[1].endswith(",")
    assert not to_csv([stats], timing=True).splitlines()[1].endswith(",")


def test_summarize_counts_against_the_reference():
    p = get_problem("paraboloid:2")
    reports = run_many("de", p, 4, 300, 2)
    s = summarize(reports, 0.0, 1e9, "de", p.name, 2, 300)
    assert (s.n, s.j_s) == (4, 4)
