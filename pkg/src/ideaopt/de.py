"""Differential evolution as a discrete dynamical system on the unit hypercube.

Each agent carries a position ``x``, a velocity ``v`` and a cached value ``f``.
One generation maps every agent through

    v' = (1 - c) v + u,     u = e * [(x_i3 - x_i) + F (x_i2 - x_i1)]
    x' = x + nu * S * v',   nu = min(v_max, |v'|) / |v'|

where ``e`` is the crossover mask and ``S`` the strict-improvement selection.
With ``c = 1`` and ``v_max = inf`` this is classic DE.  All candidates of a
generation are evaluated in one batch before any acceptance is applied.

Objectives passed to this module take an ``(m, d)`` array of normalized points
and return ``m`` values.
"""

import logging
from dataclasses import dataclass, field, replace
from math import inf
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist

from .records import Evaluator, report_from

log = logging.getLogger(__name__)

STRATEGIES = ("rand", "best")
INDEX_MODES = ("mutually_different", "allow_i1_eq_i2", "allow_i1_eq_i3", "any")


class PopulationTooSmallError(ValueError):
    pass


class UnsupportedDiagnosticError(ValueError):
    pass


@dataclass(frozen=True)
class DeParams:
    F: float = 0.9
    CR: float = 0.9
    strategy: str = "best"
    index_mode: str = "allow_i1_eq_i2"
    c: float = 1.0
    v_max: float = inf

    def __post_init__(self):
        if not 0.0 < self.F <= 2.0:
            raise ValueError("F must lie in (0, 2]")
        if not 0.0 <= self.CR <= 1.0:
            raise ValueError("CR must lie in [0, 1]")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        if self.index_mode not in INDEX_MODES:
            raise ValueError(f"index_mode must be one of {INDEX_MODES}")
        if not 0.0 <= self.c <= 1.0:
            raise ValueError("c must lie in [0, 1]")
        if not self.v_max > 0.0:
            raise ValueError("v_max must be positive")

    def min_population(self):
        return 4 if self.index_mode == "mutually_different" else 2


@dataclass
class Population:
    x: np.ndarray
    f: np.ndarray
    v: Optional[np.ndarray] = None
    generation: int = 0
    rho_a_max: float = 0.0

    def __post_init__(self):
        self.x = np.array(self.x, dtype=float, ndmin=2)
        f = np.array(self.f, dtype=float).ravel()
        self.f = np.where(np.isnan(f), inf, f)
        self.v = np.zeros_like(self.x) if self.v is None else np.array(self.v, dtype=float)
        if self.f.size != self.x.shape[0]:
            raise ValueError("one cached value per agent is required")
        self.rho_a_max = max(self.rho_a_max, contraction_radius(self.x))

    @classmethod
    def from_points(cls, x, objective):
        x = np.array(x, dtype=float, ndmin=2)
        return cls(x, objective(x))

    @classmethod
    def uniform(cls, n_pop, d, objective, rng):
        return cls.from_points(rng.random((n_pop, d)), objective)

    @property
    def n_pop(self):
        return self.x.shape[0]

    @property
    def d(self):
        return self.x.shape[1]

    @property
    def best_index(self):
        return best_index(self.f)

    @property
    def rho_a(self):
        return contraction_radius(self.x)

    def copy(self):
        return replace(self, x=self.x.copy(), f=self.f.copy(), v=self.v.copy())


@dataclass
class StepRecord:
    """Everything drawn and decided during one generation."""

    params: DeParams
    x_before: np.ndarray
    indices: np.ndarray  # (n_pop, 3): i1, i2, i3
    mask: np.ndarray
    projected: np.ndarray  # bool (n_pop, d): components resampled into [0, 1]
    candidates: np.ndarray
    f_candidates: np.ndarray
    accepted: np.ndarray
    nonfinite: int = 0
    extra: dict = field(default_factory=dict)


def best_index(f):
    """Index of the lowest value; ties go to the lowest index, NaN never wins."""
    f = np.asarray(f, dtype=float)
    return int(np.argmin(np.where(np.isnan(f), inf, f)))


def draw_mask(d, CR, rng):
    """Crossover mask with one uniformly chosen component forced to 1."""
    e = rng.random(d) <= CR
    e[rng.integers(d)] = True
    return e


def _draw_masks(n, d, CR, rng):
    e = rng.random((n, d)) <= CR
    e[np.arange(n), rng.integers(d, size=n)] = True
    return e


def _admissible(idx, i, mode, strategy):
    i1, i2, i3 = idx[:, 0], idx[:, 1], idx[:, 2]
    if mode == "any":
        return np.ones(i.size, dtype=bool)
    if mode == "allow_i1_eq_i2":
        return (i1 != i3) & (i2 != i3)
    if mode == "allow_i1_eq_i3":
        return (i1 != i2) & (i3 != i2)
    ok = (i1 != i2) & (i1 != i3) & (i2 != i3) & (i1 != i) & (i2 != i)
    if strategy == "rand":
        ok &= i3 != i
    return ok


def draw_indices(n_pop, params, rng, f=None, agents=None):
    """Draw (i1, i2, i3) for each agent by rejection until ``index_mode`` holds."""
    if n_pop < params.min_population():
        raise PopulationTooSmallError(
            f"index mode {params.index_mode} needs at least {params.min_population()} agents")
    agents = np.arange(n_pop) if agents is None else np.asarray(agents)
    idx = np.empty((agents.size, 3), dtype=np.int64)
    pending = np.arange(agents.size)
    i_best = best_index(f) if params.strategy == "best" else None
    while pending.size:
        draw = rng.integers(n_pop, size=(pending.size, 3))
        if i_best is not None:
            draw[:, 2] = i_best
        ok = _admissible(draw, agents[pending], params.index_mode, params.strategy)
        idx[pending[ok]] = draw[ok]
        pending = pending[~ok]
    return idx


def generate_trial(pop, i, params, rng):
    """Displacement ``u`` for agent ``i`` (the mutation/crossover of one agent)."""
    (i1, i2, i3), = draw_indices(pop.n_pop, params, rng, pop.f, [i])
    e = draw_mask(pop.d, params.CR, rng)
    x = pop.x
    return e * ((x[i3] - x[i]) + params.F * (x[i2] - x[i1]))


def select(f_candidate, f_current):
    """Strict-improvement selection; non-finite candidates are rejected."""
    if not np.isfinite(f_candidate):
        return 0
    return int(f_candidate < f_current)


def project_into_domain(x, rng, lower=0.0, upper=1.0):
    """Resample every out-of-bounds component uniformly inside its interval."""
    x = np.array(x, dtype=float)
    lower = np.broadcast_to(np.asarray(lower, dtype=float), x.shape)
    upper = np.broadcast_to(np.asarray(upper, dtype=float), x.shape)
    bad = (x < lower) | (x > upper) | np.isnan(x)
    if bad.any():
        x[bad] = lower[bad] + rng.random(int(bad.sum())) * (upper[bad] - lower[bad])
    return x


def _limit(vel, v_max):
    if v_max == inf:
        return vel
    speed = np.linalg.norm(vel, axis=1)
    nu = np.ones_like(speed)
    fast = speed > v_max
    nu[fast] = v_max / speed[fast]
    return vel * nu[:, None]


def step_generation(pop, params, objective, rng, record=False):
    """Advance ``pop`` by one generation in place.

    Consumes exactly ``pop.n_pop`` evaluations.  Returns a :class:`StepRecord`
    when ``record`` is true, otherwise ``None``.
    """
    n, d = pop.x.shape
    x = pop.x
    idx = draw_indices(n, params, rng, pop.f)
    e = _draw_masks(n, d, params.CR, rng)
    i1, i2, i3 = idx.T
    u = e * ((x[i3] - x) + params.F * (x[i2] - x[i1]))
    vel = (1.0 - params.c) * pop.v + u
    raw = x + _limit(vel, params.v_max)
    bad = (raw < 0.0) | (raw > 1.0)
    cand = raw.copy()
    if bad.any():
        cand[bad] = rng.random(int(bad.sum()))
    fc = np.asarray(objective(cand), dtype=float)
    finite = np.isfinite(fc)
    nonfinite = int(n - finite.sum())
    if nonfinite:
        log.debug("generation %d: %d non-finite candidate values rejected",
                  pop.generation, nonfinite)
    acc = finite & (fc < pop.f)
    rec = None
    if record:
        rec = StepRecord(params, x.copy(), idx, e, bad, cand, fc, acc, nonfinite)
    pop.x[acc] = cand[acc]
    pop.f[acc] = fc[acc]
    pop.v = vel
    pop.generation += 1
    pop.rho_a_max = max(pop.rho_a_max, contraction_radius(pop.x))
    return rec


def contraction_radius(x):
    """Largest pairwise Euclidean distance between the rows of ``x``."""
    x = np.array(x, dtype=float, ndmin=2)
    if x.shape[0] == 0:
        raise ValueError("contraction radius of an empty set")
    if x.shape[0] == 1:
        return 0.0
    return float(pdist(x).max())


def collapse_probability(n_pop, CR, d, k_h=1):
    """Chance of an instantaneous total collapse, per generation and within k_h."""
    if n_pop < 2 or d < 1 or not 0.0 < CR <= 1.0:
        raise ValueError("need n_pop >= 2, d >= 1 and CR in (0, 1]")
    p = ((1.0 / n_pop) * CR ** (d - 1)) ** (n_pop - 1)
    return p, 1.0 - (1.0 - p) ** k_h


def generation_matrix(rec):
    """Row-linear map X_{k+1} = J X_k realised by one generation with CR = 1."""
    if rec.params.CR != 1.0:
        raise UnsupportedDiagnosticError("the generation is linear in the rows only when CR = 1")
    if rec.params.c != 1.0 or rec.params.v_max != inf or rec.projected[rec.accepted].any():
        raise UnsupportedDiagnosticError("needs c = 1, v_max = inf and no projected acceptances")
    n = rec.accepted.size
    J = np.eye(n)
    F = rec.params.F
    for i in np.flatnonzero(rec.accepted):
        i1, i2, i3 = rec.indices[i]
        J[i] = 0.0
        J[i, i3] += 1.0
        J[i, i2] += F
        J[i, i1] -= F
    return J


def generation_spectrum(rec):
    """Moduli of the eigenvalues of the generation matrix."""
    return np.abs(np.linalg.eigvals(generation_matrix(rec)))


BASELINE = DeParams(F=0.75, CR=0.8, strategy="best", index_mode="mutually_different")


def run_de(problem, budget, rng, params=BASELINE, n_pop=None):
    """DE/best/1/bin baseline (``n_pop = 5 d`` by default) until the budget runs out."""
    d = problem.d
    n_pop = n_pop or 5 * d
    if budget < n_pop:
        raise ValueError(f"budget {budget} is smaller than one generation ({n_pop})")
    ev = Evaluator(problem.unit_batch, d, budget)
    pop = Population.uniform(n_pop, d, ev, rng)
    while ev.remaining >= n_pop:
        step_generation(pop, params, ev, rng)
    return report_from(ev, "de", problem)
