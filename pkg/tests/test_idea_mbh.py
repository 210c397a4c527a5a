import logging
from itertools import combinations

import numpy as np
import pytest

from ideaopt.de import DeParams
from ideaopt.idea import (IdeaParams, bubble_restart, cluster_archive, global_restart,
                          run_idea)
from ideaopt.mbh import run_mbh, sample_neighborhood
from ideaopt.problems import Problem, get_problem
from ideaopt.domain import SearchDomain


def test_idea_solves_the_paraboloid():
    p = get_problem("paraboloid:5")
    r = run_idea(p, 50_000, np.random.default_rng(0), IdeaParams(n_pop=20))
    assert r.best_f <= 1e-6
    assert r.evaluations <= 50_000


def test_idea_without_global_restarts_only_bubbles():
    p = get_problem("rastrigin:3")
    r = run_idea(p, 20_000, np.random.default_rng(1), IdeaParams(iun_max=np.inf))
    assert r.restarts and {kind for _, kind in r.restarts} == {"bubble"}


def test_idea_global_restart_after_unimproved_searches():
    p = get_problem("rastrigin:3")
    r = run_idea(p, 30_000, np.random.default_rng(2), IdeaParams(iun_max=0))
    assert "global" in {kind for _, kind in r.restarts}


def test_idea_budget_of_one_generation():
    p = get_problem("rastrigin:2")
    r = run_idea(p, 20, np.random.default_rng(3), IdeaParams(n_pop=20))
    assert r.evaluations == 20 and len(r.archive) == 0
    with pytest.raises(ValueError):
        run_idea(p, 19, np.random.default_rng(3), IdeaParams(n_pop=20))


def test_idea_archive_and_budget_invariants():
    p = get_problem("rastrigin:4")
    r = run_idea(p, 40_000, np.random.default_rng(4))
    assert r.evaluations <= 40_000
    stamps = [rec.stamp for rec in r.archive]
    assert stamps == sorted(stamps)
    assert all(rec.origin == "idea_contraction" for rec in r.archive)
    running = np.minimum.accumulate([rec.f for rec in r.archive])
    assert np.all(np.diff(running) <= 0)
    assert all(np.all((rec.x >= 0) & (rec.x <= 1)) for rec in r.archive)
    assert r.best_f == pytest.approx(min(f for _, f in r.trace))


def test_idea_contraction_is_measured_since_the_last_restart():
    p = get_problem("paraboloid:3")
    r = run_idea(p, 5_000, np.random.default_rng(5), IdeaParams(tol_conv=0.999))
    # a near-1 trigger fires after the first generation of every epoch
    stamps = [0] + [rec.stamp for rec in r.archive]
    de_cost = [rec.stamp - prev - rec.evaluations_used for prev, rec in zip(stamps, r.archive)]
    assert all(c % 20 == 0 and c >= 40 for c in de_cost)
    assert np.mean(np.array(de_cost) == 40) > 0.8


def test_idea_fallback_generation_cap():
    flat = Problem("flat", SearchDomain.unit(2), lambda x: np.zeros(len(np.atleast_2d(x))))
    r = run_idea(flat, 2_000, np.random.default_rng(6),
                 IdeaParams(n_pop=10, max_generations=20, de=DeParams(index_mode="mutually_different")))
    assert len(r.archive) >= 1


def test_idea_is_deterministic():
    p = get_problem("cassini1")
    a = run_idea(p, 5_000, np.random.default_rng(7))
    b = run_idea(p, 5_000, np.random.default_rng(7))
    assert a.trace == b.trace and a.restarts == b.restarts


def test_bubble_restart_boxes():
    rng = np.random.default_rng(8)
    centre = np.full(4, 0.5)
    pts = bubble_restart(centre, 0.2, 200, rng)
    assert np.max(np.abs(pts - centre)) <= 0.2
    corner = bubble_restart(np.ones(3), 0.2, 200, rng)
    assert np.all(corner >= 0.8) and np.all(corner <= 1.0)
    full = bubble_restart(centre, 1.0, 2000, rng)
    assert full.min() < 0.05 and full.max() > 0.95


def _brute_single_linkage(points, radius):
    n = len(points)
    label = list(range(n))
    for i, j in combinations(range(n), 2):
        if np.linalg.norm(points[i] - points[j]) <= radius:
            old, new = label[j], label[i]
            label = [new if l == old else l for l in label]
    groups = {}
    for i, l in enumerate(label):
        groups.setdefault(l, []).append(i)
    return sorted(tuple(np.mean(points[g], axis=0).round(12)) for g in groups.values())


def test_cluster_archive():
    rng = np.random.default_rng(9)
    one = np.array([[0.3, 0.4]])
    np.testing.assert_array_equal(cluster_archive(one, 0.1), one)
    pair = cluster_archive(np.array([[0.3, 0.4], [0.32, 0.4]]), 0.1)
    np.testing.assert_allclose(pair, [[0.31, 0.4]])
    assert cluster_archive(np.empty((0, 2)), 0.1).size == 0
    blobs = np.vstack([c + 0.01 * rng.standard_normal((7, 3))
                       for c in ([0.2, 0.2, 0.2], [0.8, 0.2, 0.5], [0.5, 0.9, 0.7])])[:20]
    got = sorted(tuple(c.round(12)) for c in cluster_archive(blobs, 0.1))
    assert len(got) == 3
    assert got == _brute_single_linkage(blobs, 0.1)


def test_global_restart_exclusion(caplog):
    rng = np.random.default_rng(10)
    pts, bad = global_restart(6, np.empty((0, 6)), 0.1, 20, rng)
    assert pts.shape == (20, 6) and bad == 0
    centre = np.full((1, 6), 0.5)
    pts, bad = global_restart(6, centre, 0.1, 50, rng)
    assert bad == 0 and np.all(np.linalg.norm(pts - centre, axis=1) > 0.1)
    with caplog.at_level(logging.WARNING):
        pts, bad = global_restart(2, np.full((1, 2), 0.5), 2.0, 5, rng, max_attempts=10)
    assert bad == 5 and "exclusion radius" in caplog.text


def test_mbh_neighbourhood():
    rng = np.random.default_rng(11)
    x = np.full(3, 0.5)
    np.testing.assert_array_equal(sample_neighborhood(x, 0.0, rng), x)
    for _ in range(100):
        assert np.max(np.abs(sample_neighborhood(x, 0.1, rng) - x)) <= 0.1
        y = sample_neighborhood(np.array([0.0, 1.0, 0.5]), 0.1, rng)
        assert np.all(y >= 0) and np.all(y <= 1)


def test_mbh_reaches_the_rastrigin_funnel_bottom():
    p = get_problem("rastrigin:1")
    r = run_mbh(p, 10_000, np.random.default_rng(12), delta=0.25)
    assert abs(r.best_f - p.f_best) < p.tol_f


def test_mbh_with_tiny_steps_never_leaves_its_basin():
    p = get_problem("rastrigin:2")
    r = run_mbh(p, 5_000, np.random.default_rng(13), delta=1e-9)
    first = r.archive.records[0]
    assert r.best_f == pytest.approx(first.f, abs=1e-9)


def test_mbh_gr_restart_count_on_a_flat_function():
    flat = Problem("flat", SearchDomain.unit(2), lambda x: np.ones(len(np.atleast_2d(x))))
    r = run_mbh(flat, 5_000, np.random.default_rng(14), n_samples=30)
    first_and_restarts = 1 + len(r.restarts)
    samples = len(r.archive) - first_and_restarts
    assert len(r.restarts) == samples // 30
    inf_run = run_mbh(flat, 5_000, np.random.default_rng(14))
    assert inf_run.restarts == []


def test_mbh_accepted_values_strictly_decrease():
    p = get_problem("rastrigin:3")
    r = run_mbh(p, 20_000, np.random.default_rng(15))
    accepted = [r.archive.records[0].f]
    for rec in r.archive.records[1:]:
        if rec.f < accepted[-1]:
            accepted.append(rec.f)
    assert r.best_f == accepted[-1]
    assert all(rec.origin == "mbh_sample" for rec in r.archive)


def test_mbh_budget_too_small():
    with pytest.raises(ValueError):
        run_mbh(get_problem("rastrigin:4"), 5, np.random.default_rng(0))
