"""Monotonic basin hopping, with optional restart after a run of failures."""

import logging
from math import inf

import numpy as np

from .local_search import default_budget, minimize_local
from .records import Archive, Evaluator, report_from

log = logging.getLogger(__name__)

DEFAULT_DELTA = 0.1
GR_SAMPLES = 30


def sample_neighborhood(x_l, delta, rng):
    """Uniform point of [x_l - delta, x_l + delta]^d intersected with the unit cube."""
    x_l = np.asarray(x_l, dtype=float)
    lo = np.maximum(x_l - delta, 0.0)
    hi = np.minimum(x_l + delta, 1.0)
    return lo + rng.random(x_l.size) * (hi - lo)


def run_mbh(problem, budget, rng, delta=DEFAULT_DELTA, n_samples=inf, local_budget=None,
            name=None):
    """Basin hopping; ``n_samples`` consecutive failures trigger a uniform restart.

    Every local search is archived, accepted or not.
    """
    d = problem.d
    if budget < d + 2:
        raise ValueError(f"budget {budget} cannot pay for one local search (d + 2 = {d + 2})")
    local_budget = local_budget or default_budget(d)
    name = name or ("mbh" if n_samples == inf else "mbh-gr")
    ev = Evaluator(problem.unit_batch, d, budget)
    archive = Archive()
    restarts = []

    def refine(x0):
        rec = minimize_local(ev.scalar, x0, min(local_budget, ev.remaining), origin="mbh_sample")
        rec.stamp = ev.count
        archive.add(rec)
        return rec

    current = refine(rng.random(d))
    failures = 0
    while ev.remaining >= d + 2:
        rec = refine(sample_neighborhood(current.x, delta, rng))
        if rec.f < current.f:
            current, failures = rec, 0
            continue
        failures += 1
        if failures >= n_samples:
            restarts.append((ev.count, "global"))
            failures = 0
            if ev.remaining < d + 2:
                break
            current = refine(rng.random(d))
    return report_from(ev, name, problem, restarts, archive)
