"""Inflationary differential evolution.

DE runs until the population contracts.  The best agent is then refined by a
local search and archived, and the population is re-inflated.  The usual
restart is a bubble around the refined point.  After ``iun_max`` unimproved
local searches, the restart is global and keeps away from clusters of the
archive.
"""

import logging
from dataclasses import dataclass, field
from math import inf

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import cdist

from .de import DeParams, Population, step_generation
from .local_search import default_budget, minimize_local
from .records import Archive, BudgetExhausted, Evaluator, report_from

log = logging.getLogger(__name__)

FALLBACK_GENERATIONS = 2000


@dataclass(frozen=True)
class IdeaParams:
    de: DeParams = field(default_factory=DeParams)
    n_pop: int = 0  # 0 selects 20 for d <= 10, else 40
    tol_conv: float = 0.25
    delta: float = 0.2
    delta_c: float = 0.1
    iun_max: float = inf
    local_budget: int = 0  # 0 selects 500 d
    max_generations: int = FALLBACK_GENERATIONS

    def __post_init__(self):
        if not 0.0 < self.tol_conv < 1.0:
            raise ValueError("tol_conv must lie in (0, 1)")
        if not 0.0 < self.delta <= 1.0:
            raise ValueError("delta must lie in (0, 1]")
        if not self.delta_c > 0.0:
            raise ValueError("delta_c must be positive")

    def population_size(self, d):
        return self.n_pop or (20 if d <= 10 else 40)

    @classmethod
    def for_problem(cls, problem, **overrides):
        values = dict(delta=problem.bubble_delta, iun_max=problem.iun_max)
        values.update(overrides)
        return cls(**values)


def bubble_restart(x_l, delta, n_pop, rng):
    """Uniform points in [x_l - delta, x_l + delta]^d clipped to the unit cube."""
    x_l = np.asarray(x_l, dtype=float)
    lo = np.maximum(x_l - delta, 0.0)
    hi = np.minimum(x_l + delta, 1.0)
    return lo + rng.random((n_pop, x_l.size)) * (hi - lo)


def cluster_archive(points, radius):
    """Single-linkage clusters of the archived points; returns their barycentres."""
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        return np.empty((0, 0))
    points = np.atleast_2d(points)
    if points.shape[0] == 1:
        return points.copy()
    labels = fcluster(linkage(points, method="single"), t=radius, criterion="distance")
    return np.array([points[labels == k].mean(axis=0) for k in np.unique(labels)])


def global_restart(d, centres, delta_c, n_pop, rng, max_attempts=None):
    """Uniform points farther than ``delta_c`` from every centre.

    Each agent gets ``max_attempts`` draws (default ``100 n_pop``).  When none is
    feasible, the draw farthest from the nearest centre is kept.  Returns the
    points and the number of agents placed that way.
    """
    max_attempts = max_attempts or 100 * n_pop
    centres = np.asarray(centres, dtype=float)
    if centres.size == 0:
        return rng.random((n_pop, d)), 0
    centres = centres.reshape(-1, d)
    out = np.empty((n_pop, d))
    infeasible = 0
    for i in range(n_pop):
        best, best_gap = None, -inf
        for _ in range(max_attempts):
            x = rng.random(d)
            gap = float(cdist(x[None, :], centres).min())
            if gap > delta_c:
                best = x
                break
            if gap > best_gap:
                best, best_gap = x, gap
        else:
            infeasible += 1
        out[i] = best
    if infeasible:
        log.warning("global restart: %d of %d agents could not clear the exclusion radius %g",
                    infeasible, n_pop, delta_c)
    return out, infeasible


def run_idea(problem, budget, rng, params=None):
    """One IDEA run on ``problem`` with ``budget`` evaluations.

    Returns a :class:`~ideaopt.records.RunReport` whose ``archive`` holds one
    record per local search.
    """
    params = params or IdeaParams.for_problem(problem)
    d = problem.d
    n_pop = params.population_size(d)
    if budget < n_pop:
        raise ValueError(f"budget {budget} is smaller than one generation ({n_pop})")
    local_budget = params.local_budget or default_budget(d)
    ev = Evaluator(problem.unit_batch, d, budget)
    archive = Archive()
    restarts = []
    f_min, iun = inf, 0
    pop = Population.uniform(n_pop, d, ev, rng)
    epoch_start = 0
    try:
        while ev.remaining >= n_pop:
            step_generation(pop, params.de, ev, rng)
            contracted = pop.rho_a < params.tol_conv * pop.rho_a_max
            stalled = pop.generation - epoch_start >= params.max_generations
            if not (contracted or stalled):
                continue
            if ev.remaining < d + 2:
                break
            b = pop.best_index
            rec = minimize_local(ev.scalar, pop.x[b], min(local_budget, ev.remaining),
                                 origin="idea_contraction")
            rec.stamp = ev.count
            archive.add(rec)
            # the local search never worsens its start, so rec.x is the better point
            if rec.f < f_min:
                f_min, iun = rec.f, 0
            else:
                iun += 1
            if ev.remaining < n_pop:
                break
            if iun <= params.iun_max:
                x0 = bubble_restart(rec.x, params.delta, n_pop, rng)
                restarts.append((ev.count, "bubble"))
            else:
                centres = cluster_archive(archive.points, params.delta_c)
                x0, _ = global_restart(d, centres, params.delta_c, n_pop, rng)
                restarts.append((ev.count, "global"))
                iun = 0
            generation = pop.generation
            pop = Population.from_points(x0, ev)
            pop.generation = epoch_start = generation
    except BudgetExhausted:  # pragma: no cover - guarded by the checks above
        pass
    return report_from(ev, "idea", problem, restarts, archive)

