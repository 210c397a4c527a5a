"""Closed-form test functions (vectorized over rows)."""

import numpy as np

SCHWEFEL_ARGMIN = 420.968746


def paraboloid(x):
    x = np.asarray(x, dtype=float)
    return np.sum(x * x, axis=-1)


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    return 10.0 * d + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x), axis=-1)


def schwefel(x):
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    return 418.9828872724339 * d - np.sum(x * np.sin(np.sqrt(np.abs(x))), axis=-1)


FUNCTIONS = {
    "paraboloid": (paraboloid, (-1.0, 1.0)),
    "rastrigin": (rastrigin, (-5.12, 5.12)),
    "schwefel": (schwefel, (-500.0, 500.0)),
}


def evaluate_analytic(name, x, d=None):
    try:
        func, _ = FUNCTIONS[name]
    except KeyError:
        raise KeyError(f"unknown analytic function {name!r}") from None
    x = np.asarray(x, dtype=float)
    if d is not None and x.shape[-1] != d:
        raise ValueError(f"expected dimension {d}, got {x.shape[-1]}")
    return float(func(x)) if x.ndim == 1 else func(x)


def argmin(name, d):
    if name == "schwefel":
        return np.full(d, SCHWEFEL_ARGMIN)
    return np.zeros(d)
