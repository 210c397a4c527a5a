"""Run bookkeeping: evaluation counting, archived minima and run reports."""

import csv
import json
from dataclasses import dataclass, field
from math import inf
from typing import Optional

import numpy as np

ORIGINS = ("idea_contraction", "mbh_sample", "harvest")


class BudgetExhausted(Exception):
    pass


class Evaluator:
    """Counts evaluations of a normalized batch objective and tracks the best point.

    ``trace`` holds ``(evaluations, best_f)`` each time the best value improves.
    """

    def __init__(self, batch, d, budget=inf):
        self.batch = batch
        self.d = d
        self.budget = budget
        self.count = 0
        self.best_f = inf
        self.best_x = None
        self.trace = []

    @property
    def remaining(self):
        return self.budget - self.count

    def __call__(self, u):
        u = np.array(u, dtype=float, ndmin=2)
        if self.count + u.shape[0] > self.budget:
            raise BudgetExhausted(f"{u.shape[0]} evaluations requested, {self.remaining} left")
        f = np.asarray(self.batch(u), dtype=float).ravel()
        f = np.where(np.isfinite(f), f, inf)
        self.count += u.shape[0]
        k = int(np.argmin(f))
        if f[k] < self.best_f:
            self.best_f = float(f[k])
            self.best_x = u[k].copy()
            self.trace.append((self.count, self.best_f))
        return f

    def scalar(self, u):
        return float(self(u)[0])


@dataclass
class MinimumRecord:
    x: np.ndarray
    f: float
    evaluations_used: int
    origin: str
    stamp: int = 0  # run evaluation count when the record was made
    degenerate: bool = False

    def to_dict(self):
        return {"x": [float(v) for v in self.x], "f": float(self.f),
                "evaluations_used": int(self.evaluations_used), "origin": self.origin,
                "stamp": int(self.stamp)}

    @classmethod
    def from_dict(cls, row):
        return cls(np.array(row["x"], dtype=float), float(row["f"]),
                   int(row.get("evaluations_used", 0)), row.get("origin", "harvest"),
                   int(row.get("stamp", 0)))


@dataclass
class Archive:
    records: list = field(default_factory=list)

    @property
    def f_min(self):
        return min((r.f for r in self.records), default=inf)

    def add(self, record):
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def points(self):
        if not self.records:
            return np.empty((0, 0))
        return np.array([r.x for r in self.records])

    @property
    def values(self):
        return np.array([r.f for r in self.records])

    def write_jsonl(self, path, problem=None):
        with open(path, "w") as fh:
            for r in self.records:
                row = r.to_dict()
                if problem is not None:
                    row["problem"] = problem
                fh.write(json.dumps(row) + "\n")

    @classmethod
    def read_jsonl(cls, path):
        archive = cls()
        with open(path) as fh:
            for line in fh:
                if line.strip():
                    archive.add(MinimumRecord.from_dict(json.loads(line)))
        return archive


@dataclass
class RunReport:
    algorithm: str
    problem: str
    best_x: Optional[np.ndarray]  # physical units
    best_f: float
    evaluations: int
    trace: list = field(default_factory=list)
    restarts: list = field(default_factory=list)  # (evaluations, kind)
    archive: Archive = field(default_factory=Archive)

    def write_trace_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["evaluations", "best_f"])
            for n, f in self.trace:
                w.writerow([n, repr(float(f))])


def report_from(evaluator, algorithm, problem, restarts=(), archive=None):
    x = None if evaluator.best_x is None else problem.domain.denormalize(evaluator.best_x)
    trace = list(evaluator.trace)
    if not trace or trace[-1][0] != evaluator.count:
        trace.append((evaluator.count, evaluator.best_f))
    return RunReport(algorithm, problem.name, x, evaluator.best_f, evaluator.count, trace,
                     list(restarts), archive if archive is not None else Archive())
