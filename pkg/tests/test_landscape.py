import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ideaopt.landscape import (assign_levels, default_edges, harvest_minima, level_distances,
                               level_means, merge_minima)
from ideaopt.problems import get_problem
from ideaopt.records import MinimumRecord


def test_half_open_levels():
    part = assign_levels(np.zeros((5, 1)), [0.0, 0.99, 1.0, 1.5, 2.0], edges=[1.0, 2.0])
    assert part.levels.tolist() == [1, 1, 2, 2, 3]
    single = assign_levels(np.zeros((1, 1)), [3.0], edges=[1.0, 2.0])
    assert single.levels.tolist() == [3]


def test_level_assignment_rejects_bad_input():
    with pytest.raises(ValueError):
        assign_levels(np.zeros((0, 2)), [], edges=[1.0])
    with pytest.raises(ValueError):
        assign_levels(np.zeros((2, 1)), [0.0, 1.0], edges=[1.0, 1.0])


def _linear_scan(values, edges):
    out = []
    for f in values:
        level = 1
        for e in edges:
            if f >= e:
                level += 1
        out.append(level)
    return out


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=1, max_size=100),
       st.lists(st.floats(-50, 50), min_size=0, max_size=8, unique=True))
def test_level_assignment_matches_a_linear_scan(values, edges):
    edges = sorted(edges)
    part = assign_levels(np.zeros((len(values), 1)), values, edges=edges)
    assert part.levels.tolist() == _linear_scan(values, edges)


def test_default_edges_are_equal_width_interior_thresholds():
    np.testing.assert_allclose(default_edges([0.0, 8.0, 3.0]), np.arange(1.0, 8.0))
    assert default_edges([2.0, 2.0]).size == 0


def _oracle_distances(points, levels, best):
    n = len(points)
    occupied = sorted(set(levels))
    d_il, d_tl = [], []
    for i in range(n):
        same = [j for j in range(n) if levels[j] == levels[i] and j != i]
        d_il.append(np.mean([np.linalg.norm(points[i] - points[j]) for j in same])
                    if same else np.nan)
        k = occupied.index(levels[i])
        if k == 0:
            d_tl.append(np.linalg.norm(points[i] - best))
        else:
            lower = [j for j in range(n) if levels[j] == occupied[k - 1]]
            d_tl.append(np.mean([np.linalg.norm(points[i] - points[j]) for j in lower]))
    return np.array(d_il), np.array(d_tl)


def test_level_distances_against_pairwise_loops():
    rng = np.random.default_rng(0)
    points = rng.random((30, 3))
    values = rng.random(30) * 3
    # level 3 (values in [2, 2.5)) left empty on purpose
    values[(values >= 2.0) & (values < 2.5)] = 2.7
    part = assign_levels(points, values, edges=[1.0, 2.0, 2.5])
    best = np.full(3, 0.5)
    d_il, d_tl = level_distances(part, best)
    o_il, o_tl = _oracle_distances(points, part.levels.tolist(), best)
    np.testing.assert_allclose(d_il, o_il, rtol=1e-12)
    np.testing.assert_allclose(d_tl, o_tl, rtol=1e-12)


def test_singleton_levels_have_no_intra_distance():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])
    part = assign_levels(points, [0.0, 5.0, 5.5], edges=[1.0])
    d_il, d_tl = level_distances(part, np.array([0.0, 0.0]))
    assert np.isnan(d_il[0]) and d_il[1] == d_il[2] == 1.0
    assert d_tl.tolist() == [0.0, 1.0, np.sqrt(2)]
    rows = level_means(part, d_il, d_tl)
    assert rows[0][:2] == (1, 1) and np.isnan(rows[0][2])
    assert rows[1] == (2, 2, 1.0, pytest.approx((1 + np.sqrt(2)) / 2))


def test_merge_keeps_the_first_of_near_duplicates():
    recs = [MinimumRecord(np.array([0.5, 0.5]), 1.0, 10, "harvest"),
            MinimumRecord(np.array([0.5, 0.50005]), 1.0 + 1e-7, 10, "harvest"),
            MinimumRecord(np.array([0.5, 0.5]), 1.1, 10, "harvest"),
            MinimumRecord(np.array([0.6, 0.5]), 1.0, 10, "harvest")]
    kept = merge_minima(recs)
    assert len(kept) == 3 and kept.records[0] is recs[0]


def test_harvest_on_a_paraboloid_finds_one_minimum():
    p = get_problem("paraboloid:3")
    archive = harvest_minima(p.unit_objective, 3, 20, np.random.default_rng(1), tol=1e-10)
    assert len(archive) == 1


def test_harvest_rastrigin_1d_finds_its_basins():
    p = get_problem("rastrigin:1")
    archive = harvest_minima(p.unit_objective, 1, 200, np.random.default_rng(2), tol=1e-10)
    # oracle: local minima of the 1-d function on a fine grid
    grid = np.linspace(0, 1, 200_001)
    f = np.array([p.unit_objective(np.array([g])) for g in grid[::10]])
    inner = np.flatnonzero((f[1:-1] < f[:-2]) & (f[1:-1] < f[2:])) + 1
    assert len(inner) == 11
    found = np.sort(archive.points[:, 0])
    # every grid minimum with a visible basin is recovered
    for g in grid[::10][inner]:
        assert np.min(np.abs(found - g)) < 1e-3
    assert len(archive) <= len(inner) + 2


def test_harvest_single_start():
    p = get_problem("rastrigin:2")
    assert len(harvest_minima(p.unit_objective, 2, 1, np.random.default_rng(3))) == 1
    with pytest.raises(ValueError):
        harvest_minima(p.unit_objective, 2, 0, np.random.default_rng(3))
