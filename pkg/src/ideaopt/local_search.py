"""Bounded Nelder-Mead refinement on the unit hypercube."""

from math import inf

import numpy as np
from scipy.optimize import minimize

from .records import MinimumRecord

SIMPLEX_EDGE = 0.05
DEFAULT_TOL = 1e-8


class _Stop(Exception):
    pass


def default_budget(d):
    return 500 * d


def initial_simplex(x0, edge=SIMPLEX_EDGE):
    d = x0.size
    sim = np.tile(x0, (d + 1, 1))
    for j in range(d):
        step = edge if x0[j] + edge <= 1.0 else -edge
        sim[j + 1, j] += step
    return sim


def minimize_local(objective, x0, budget=None, tol=DEFAULT_TOL, origin="harvest"):
    """Refine ``x0`` inside [0, 1]^d with at most ``budget`` evaluations.

    ``objective`` maps one normalized point to a float.  The result never has
    a higher value than ``x0``.  A non-finite value at ``x0`` returns ``x0``
    unchanged with ``degenerate`` set.
    """
    x0 = np.clip(np.asarray(x0, dtype=float), 0.0, 1.0)
    d = x0.size
    budget = default_budget(d) if budget is None else int(budget)
    if budget < d + 2:
        raise ValueError(f"local search needs a budget of at least d + 2 = {d + 2}")

    best = {"x": x0.copy(), "f": inf, "n": 0}

    def fun(x):
        if best["n"] >= budget:
            raise _Stop
        best["n"] += 1
        f = float(objective(x))
        if not np.isfinite(f):
            f = inf
        if f < best["f"]:
            best["x"], best["f"] = np.array(x, dtype=float), f
        return f

    f0 = fun(x0)
    if f0 == inf:
        return MinimumRecord(x0, f0, best["n"], origin, degenerate=True)
    sim = initial_simplex(x0)
    cache = {0: f0}

    def fun_cached(x):
        # scipy re-evaluates the first simplex vertex; reuse the known value
        if cache and np.array_equal(x, x0):
            return cache.pop(0)
        return fun(x)

    try:
        minimize(fun_cached, x0, method="Nelder-Mead", bounds=[(0.0, 1.0)] * d,
                 options={"initial_simplex": sim, "xatol": tol, "fatol": inf,
                          "maxfev": budget, "maxiter": 10 ** 9})
    except _Stop:
        pass
    return MinimumRecord(best["x"], best["f"], best["n"], origin)
