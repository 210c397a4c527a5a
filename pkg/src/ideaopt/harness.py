"""Repeated-run success statistics and performance curves."""

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from math import ceil

import numpy as np
from scipy.stats import chi2, norm

from .de import run_de
from .idea import run_idea
from .mbh import GR_SAMPLES, run_mbh

CSV_FIELDS = ("algorithm", "problem", "seed", "N", "n", "j_s", "p_s", "ci_low", "ci_high",
              "wall_seconds")

ALGORITHMS = {
    "idea": run_idea,
    "de": run_de,
    "mbh": run_mbh,
    "mbh-gr": partial(run_mbh, n_samples=GR_SAMPLES),
}


def get_algorithm(name):
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise KeyError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}") from None


def child_rng(seed, index):
    """Independent stream for run ``index`` of an experiment seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def required_sample_size(d_err, alpha):
    """Runs needed so a binomial success rate has half-width ``d_err`` at level ``alpha``.

    Uses the worst case p(1 - p) = 1/4, i.e. n = ceil(chi2_1(1 - alpha) / (4 d_err^2)).
    """
    if not (0.0 < d_err < 1.0 and 0.0 < alpha < 1.0):
        raise ValueError("d_err and alpha must lie in (0, 1)")
    return max(1, ceil(0.25 * float(chi2.ppf(1.0 - alpha, 1)) / d_err ** 2))


def wilson_interval(j, n, alpha=0.05):
    if n <= 0:
        raise ValueError("need at least one run")
    z = float(norm.ppf(1.0 - alpha / 2.0))
    p = j / n
    den = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / den
    half = z * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class SuccessStats:
    algorithm: str
    problem: str
    seed: int
    N: int
    n: int
    j_s: int
    ci_low: float
    ci_high: float
    wall_seconds: float = None

    @property
    def p_s(self):
        return self.j_s / self.n

    def row(self, timing=False):
        wall = f"{self.wall_seconds:.3f}" if timing and self.wall_seconds is not None else ""
        return [self.algorithm, self.problem, self.seed, self.N, self.n, self.j_s,
                f"{self.p_s:.6f}", f"{self.ci_low:.6f}", f"{self.ci_high:.6f}", wall]


def successes(values, f_ref, tol_f):
    """Per-run success flags: |f_ref - f| < tol_f."""
    values = np.asarray(values, dtype=float)
    return np.abs(f_ref - values) < tol_f


def _run_index(algorithm, problem, budget, seed, index):
    return algorithm(problem, budget, child_rng(seed, index))


def run_many(algorithm, problem, n, budget, seed, jobs=1):
    """``n`` independent runs, returned in run-index order.

    ``algorithm`` is a registered name or a callable ``(problem, budget, rng)``;
    with ``jobs > 1`` the callable must be picklable.
    """
    if n < 1:
        raise ValueError("need at least one run")
    if isinstance(algorithm, str):
        algorithm = get_algorithm(algorithm)
    func = partial(_run_index, algorithm, problem, budget, seed)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, range(n)))
    return [func(i) for i in range(n)]


def run_benchmark(algorithm, problem, n, budget, seed, f_ref=None, tol_f=None, jobs=1,
                  alpha=0.05, name=None):
    """Apply ``algorithm`` ``n`` times and count successes against ``f_ref``."""
    f_ref = problem.f_best if f_ref is None else f_ref
    if f_ref is None:
        raise ValueError(f"{problem.name} has no reference value")
    tol_f = problem.tol_f if tol_f is None else tol_f
    start = time.perf_counter()
    reports = run_many(algorithm, problem, n, budget, seed, jobs)
    wall = time.perf_counter() - start
    stats = summarize(reports, f_ref, tol_f, algorithm_name(algorithm, name), problem.name,
                      seed, budget, alpha)
    stats.wall_seconds = wall
    return stats, reports


def algorithm_name(algorithm, name=None):
    if name:
        return name
    if isinstance(algorithm, str):
        return algorithm
    return getattr(algorithm, "__name__", "custom")


def summarize(reports, f_ref, tol_f, algorithm, problem, seed, budget, alpha=0.05):
    """Success statistics of finished runs against ``f_ref``."""
    n = len(reports)
    j = int(successes([r.best_f for r in reports], f_ref, tol_f).sum())
    lo, hi = wilson_interval(j, n, alpha)
    return SuccessStats(algorithm, problem, seed, budget, n, j, lo, hi)


def performance_curve(algorithm, problem, budgets, n, seed, **kwargs):
    """Success statistics for each budget; runs are repeated (never reused) per budget."""
    budgets = list(budgets)
    if budgets != sorted(budgets):
        raise ValueError("budgets must be sorted ascending")
    return [run_benchmark(algorithm, problem, n, N, seed, **kwargs)[0] for N in budgets]


def to_csv(stats, timing=False):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for s in stats:
        w.writerow(s.row(timing))
    return buf.getvalue()
