"""Box-shaped search domains and the unit-hypercube mapping."""

from dataclasses import dataclass

import numpy as np


class OutOfBoundsError(ValueError):
    pass


@dataclass(frozen=True)
class SearchDomain:
    """A d-dimensional box ``[lower, upper]`` in problem units."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float).ravel()
        upper = np.asarray(self.upper, dtype=float).ravel()
        if lower.shape != upper.shape or lower.size == 0:
            raise ValueError("lower and upper must be non-empty vectors of equal length")
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def unit(cls, d):
        return cls(np.zeros(d), np.ones(d))

    @classmethod
    def cube(cls, low, high, d):
        return cls(np.full(d, float(low)), np.full(d, float(high)))

    @property
    def d(self):
        return self.lower.size

    @property
    def width(self):
        return self.upper - self.lower

    def contains(self, x, atol=0.0):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower - atol) and np.all(x <= self.upper + atol))

    def normalize(self, x, check=True):
        """Map points of the box onto [0, 1]^d (works row-wise on 2-d input)."""
        x = np.asarray(x, dtype=float)
        if check and not (np.all(x >= self.lower) and np.all(x <= self.upper)):
            raise OutOfBoundsError("point lies outside the search domain")
        return (x - self.lower) / self.width

    def denormalize(self, u):
        return self.lower + np.asarray(u, dtype=float) * self.width

    def clip(self, x):
        return np.clip(x, self.lower, self.upper)

    def sample(self, rng, n=None):
        shape = (self.d,) if n is None else (n, self.d)
        return self.lower + rng.random(shape) * self.width
