"""Benchmark problems: analytic test functions and interplanetary transfers.

Every problem exposes a box :class:`~ideaopt.domain.SearchDomain` in problem
units, a scalar ``objective`` and a row-wise ``batch`` evaluator.  The
optimizers work on the unit hypercube through :meth:`Problem.unit_batch`.
"""

from dataclasses import dataclass, field
from math import inf, pi
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from ..astro.constants import planet_mu, planet_radius
from ..astro.ephemeris import body_row
from ..domain import SearchDomain
from . import _trajectory
from .analytic import FUNCTIONS, argmin

__all__ = ["Problem", "get_problem", "problem_names", "breakdown", "MgaMission", "DsmMission"]

TWO_PI = 2.0 * pi

# Ephemeris conventions under which the stored best-known objective values are
# reproduced: longitudes of date and epochs counted from J2000 noon.
BENCHMARK_FRAME = "date"
BENCHMARK_ORIGIN = "noon"


@dataclass
class Problem:
    name: str
    domain: SearchDomain
    batch: Callable[[np.ndarray], np.ndarray]
    f_best: Optional[float] = None
    x_best: Optional[np.ndarray] = None
    tol_f: float = 1e-6
    iun_max: float = inf
    bubble_delta: float = 0.2
    mission: object = field(default=None, repr=False)

    @property
    def d(self):
        return self.domain.d

    def objective(self, x):
        return float(self.batch(np.asarray(x, dtype=float)[None, :])[0])

    def unit_batch(self, u):
        return self.batch(self.domain.denormalize(np.atleast_2d(u)))

    def unit_objective(self, u):
        return float(self.unit_batch(u)[0])


@dataclass
class MgaMission:
    """Powered-swing-by sequence with Lambert legs between bodies."""

    bodies: tuple
    rp_min: np.ndarray
    weights: np.ndarray
    rp_insert: float
    e_insert: float
    rows: Optional[np.ndarray] = None
    frame: str = BENCHMARK_FRAME
    origin: str = BENCHMARK_ORIGIN

    def __post_init__(self):
        if self.rows is None:
            self.rows = np.array([body_row(b, self.frame, self.origin) for b in self.bodies])
        self.mus = np.array([_planet_or_zero(planet_mu, b) for b in self.bodies])
        self.radii = np.array([_planet_or_zero(planet_radius, b) for b in self.bodies])

    def batch(self, x):
        x = np.ascontiguousarray(np.atleast_2d(x), dtype=float)
        return _trajectory.mga_batch(x, self.rows, self.mus, self.radii, self.rp_min,
                                     self.weights, self.rp_insert, self.e_insert)

    def breakdown(self, x):
        n_legs = len(self.bodies) - 1
        out = np.full(2 * n_legs + 1, np.nan)
        f = _trajectory.mga_objective(np.asarray(x, dtype=float), self.rows, self.mus,
                                      self.radii, self.rp_min, self.weights, self.rp_insert,
                                      self.e_insert, out)
        return {"f": f, "dv_launch": out[0], "dv_swingby": out[1:n_legs],
                "dv_arrival": out[n_legs], "rp": out[n_legs + 1:2 * n_legs],
                "penalty": out[2 * n_legs]}


@dataclass
class DsmMission:
    """Unpowered swing-bys with one deep-space manoeuvre per leg."""

    bodies: tuple
    include_v0: bool
    rows: Optional[np.ndarray] = None
    frame: str = BENCHMARK_FRAME
    origin: str = BENCHMARK_ORIGIN

    def __post_init__(self):
        if self.rows is None:
            self.rows = np.array([body_row(b, self.frame, self.origin) for b in self.bodies])
        self.mus = np.array([_planet_or_zero(planet_mu, b) for b in self.bodies])
        self.radii = np.array([_planet_or_zero(planet_radius, b) for b in self.bodies])

    @property
    def n_legs(self):
        return len(self.bodies) - 1

    @property
    def dimension(self):
        return 4 * self.n_legs + 2

    def batch(self, x):
        x = np.ascontiguousarray(np.atleast_2d(x), dtype=float)
        if x.shape[1] != self.dimension:
            raise ValueError(f"expected {self.dimension} decision variables, got {x.shape[1]}")
        return _trajectory.mgadsm_batch(x, self.rows, self.mus, self.radii, self.include_v0)

    def breakdown(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full(self.n_legs + 2, np.nan)
        f = _trajectory.mgadsm_objective(x, self.rows, self.mus, self.radii, self.include_v0,
                                         out)
        return {"f": f, "v0": out[0], "dv_dsm": out[1:self.n_legs + 1],
                "dv_arrival": out[self.n_legs + 1]}


def _planet_or_zero(func, body):
    try:
        return func(body)
    except KeyError:
        return 0.0


def _read_best_known():
    table = {}
    text = (Path(__file__).parent / "data" / "best_known.txt").read_text()
    for line in text.splitlines():
        line = line.split("#", 1)[0].split()
        if not line:
            continue
        name, tol, f_best, *x = line
        table[name] = (float(tol), float(f_best), np.array([float(v) for v in x]) if x else None)
    return table


def _dsm_bounds(t0, v0, t_bounds, a_bounds, rp_bounds, g_bounds):
    lo = [t0[0], v0[0], 0.0, 0.0]
    hi = [t0[1], v0[1], 1.0, 1.0]
    for group in (t_bounds, a_bounds, rp_bounds, g_bounds):
        lo += [b[0] for b in group]
        hi += [b[1] for b in group]
    return SearchDomain(np.array(lo), np.array(hi))


def _cassini1():
    mission = MgaMission(
        bodies=("earth", "venus", "venus", "earth", "jupiter", "saturn"),
        rp_min=np.array([1.0496, 1.0496, 1.0627, 9.3925]),
        weights=np.array([0.005, 0.005, 0.005, 0.0005]),
        rp_insert=108950.0,
        e_insert=0.98,
    )
    domain = SearchDomain(np.array([-1000.0, 30.0, 100.0, 30.0, 400.0, 1000.0]),
                          np.array([0.0, 400.0, 470.0, 400.0, 2000.0, 6000.0]))
    return mission, domain, dict(iun_max=inf)


def _cassini2():
    mission = DsmMission(("earth", "venus", "venus", "earth", "jupiter", "saturn"), True)
    domain = _dsm_bounds((-1000.0, 0.0), (3.0, 5.0),
                         [(100, 400), (100, 500), (30, 300), (400, 1600), (800, 2200)],
                         [(0.01, 0.9)] * 5,
                         [(1.05, 6.0), (1.05, 6.0), (1.15, 6.5), (1.7, 291.0)],
                         [(0.0, TWO_PI)] * 4)
    return mission, domain, dict(iun_max=inf)


def _rosetta():
    mission = DsmMission(("earth", "earth", "mars", "earth", "earth", "67p"), False)
    domain = _dsm_bounds((1460.0, 1825.0), (3.0, 5.0),
                         [(300, 500), (150, 800), (150, 800), (300, 800), (700, 1850)],
                         [(0.01, 0.9)] * 5,
                         [(1.05, 9.0)] * 4,
                         [(0.0, TWO_PI), (-pi, pi), (0.0, TWO_PI), (0.0, TWO_PI)])
    return mission, domain, dict(iun_max=2)


def _messenger():
    mission = DsmMission(("earth", "earth", "venus", "venus", "mercury"), True)
    domain = _dsm_bounds((1000.0, 4000.0), (1.0, 5.0),
                         [(200, 400)] + [(30, 400)] * 3,
                         [(0.01, 0.99)] * 4,
                         [(1.1, 6.0)] * 3,
                         [(-pi, pi)] * 3)
    return mission, domain, dict(iun_max=6, bubble_delta=0.25)


_TRAJECTORIES = {
    "cassini1": _cassini1,
    "cassini2": _cassini2,
    "rosetta": _rosetta,
    "messenger": _messenger,
}

DEFAULT_ANALYTIC_DIM = 5


def problem_names():
    return sorted(_TRAJECTORIES) + sorted(FUNCTIONS)


def get_problem(name, d=None):
    """Look up a problem by name; analytic functions accept ``name:d`` or ``d``."""
    key = name.lower()
    if ":" in key:
        key, dim = key.split(":", 1)
        d = int(dim)
    if key in _TRAJECTORIES:
        if d is not None:
            raise ValueError(f"{key} has a fixed dimension")
        mission, domain, extra = _TRAJECTORIES[key]()
        tol, f_best, x_best = _read_best_known()[key]
        return Problem(key, domain, mission.batch, f_best=f_best, x_best=x_best, tol_f=tol,
                       mission=mission, **extra)
    if key in FUNCTIONS:
        func, (low, high) = FUNCTIONS[key]
        d = DEFAULT_ANALYTIC_DIM if d is None else d
        if d < 1:
            raise ValueError("dimension must be positive")
        x_best = argmin(key, d)
        return Problem(key, SearchDomain.cube(low, high, d), func, f_best=float(func(x_best)),
                       x_best=x_best, tol_f=1e-4)
    raise KeyError(f"unknown problem {name!r}; choose from {problem_names()}")


def breakdown(problem, x):
    """Per-manoeuvre cost decomposition of a trajectory problem."""
    if problem.mission is None:
        raise ValueError(f"{problem.name} is not a trajectory problem")
    return problem.mission.breakdown(x)
