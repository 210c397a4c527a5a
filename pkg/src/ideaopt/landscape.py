"""Funnel diagnostics over a set of local minima.

Minima are grouped into objective-value levels.  For each minimum we report
two distances.  ``d_il`` is the mean distance to the other minima of its
level.  ``d_tl`` is the mean distance to the minima of the next lower level.
For the lowest level ``d_tl`` is the distance to the best-known point.  All
distances are taken in normalized coordinates.
"""

import csv
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .local_search import minimize_local
from .records import Archive

MERGE_DISTANCE = 1e-4
MERGE_DF = 1e-6
DEFAULT_LEVELS = 8


@dataclass
class LevelPartition:
    edges: np.ndarray  # interior thresholds, strictly increasing
    levels: np.ndarray  # level of each minimum, 1 = lowest values
    points: np.ndarray
    values: np.ndarray

    @property
    def n_levels(self):
        return self.edges.size + 1

    def members(self, level):
        return np.flatnonzero(self.levels == level)


def default_edges(values, n_levels=DEFAULT_LEVELS):
    """Interior thresholds of ``n_levels`` equal-width bins over the observed range."""
    values = np.asarray(values, dtype=float)
    lo, hi = values.min(), values.max()
    if hi <= lo:
        return np.empty(0)
    return np.linspace(lo, hi, n_levels + 1)[1:-1]


def assign_levels(points, values, edges=None):
    """Level ``L`` holds the minima with ``edges[L-2] <= f < edges[L-1]`` (half-open)."""
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise ValueError("no minima to partition")
    edges = default_edges(values) if edges is None else np.asarray(edges, dtype=float).ravel()
    if np.any(np.diff(edges) <= 0):
        raise ValueError("level edges must be strictly increasing")
    levels = np.searchsorted(edges, values, side="right") + 1
    return LevelPartition(edges, levels, np.atleast_2d(np.asarray(points, dtype=float)), values)


def level_distances(partition, best_known):
    """Per-minimum ``(d_il, d_tl)``; ``d_il`` is NaN for a singleton level."""
    x = partition.points
    n = x.shape[0]
    d_il = np.full(n, np.nan)
    d_tl = np.full(n, np.nan)
    occupied = sorted(set(partition.levels.tolist()))
    best_known = np.asarray(best_known, dtype=float).reshape(1, -1)
    for k, level in enumerate(occupied):
        idx = partition.members(level)
        if idx.size > 1:
            dist = cdist(x[idx], x[idx])
            d_il[idx] = dist.sum(axis=1) / (idx.size - 1)
        below = best_known if k == 0 else x[partition.members(occupied[k - 1])]
        d_tl[idx] = cdist(x[idx], below).mean(axis=1)
    return d_il, d_tl


def level_means(partition, d_il, d_tl):
    """``(level, count, mean d_il, mean d_tl)`` for each occupied level, lowest first."""
    rows = []
    for level in sorted(set(partition.levels.tolist())):
        idx = partition.members(level)
        il = d_il[idx]
        il = float(np.nanmean(il)) if np.isfinite(il).any() else float("nan")
        rows.append((level, idx.size, il, float(d_tl[idx].mean())))
    return rows


def merge_minima(records, distance=MERGE_DISTANCE, df=MERGE_DF):
    """Drop records within ``distance`` and ``df`` of an earlier kept record."""
    kept = []
    for rec in records:
        dup = any(abs(rec.f - k.f) < df and np.linalg.norm(rec.x - k.x) < distance for k in kept)
        if not dup:
            kept.append(rec)
    return Archive(kept)


def harvest_minima(objective, d, n_starts, rng, local_budget=None, tol=1e-8):
    """Multistart local search from uniform points, near-duplicates merged.

    ``objective`` maps one normalized point to a float.
    """
    if n_starts < 1:
        raise ValueError("need at least one start")
    records = []
    for _ in range(n_starts):
        rec = minimize_local(objective, rng.random(d), local_budget, tol=tol, origin="harvest")
        records.append(rec)
    return merge_minima(records)


CSV_FIELDS = ("id", "f", "level", "d_il", "d_tl")


def write_csv(path, partition, d_il, d_tl):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for i in range(partition.values.size):
            il = "" if np.isnan(d_il[i]) else repr(float(d_il[i]))
            w.writerow([i, repr(float(partition.values[i])), int(partition.levels[i]), il,
                        repr(float(d_tl[i]))])
