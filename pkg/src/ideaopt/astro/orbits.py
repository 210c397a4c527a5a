"""Two-body propagation and the Lambert problem."""

import numpy as np

from . import _kernels
from .constants import DAY
from .ephemeris import BodyState


class ConvergenceError(RuntimeError):
    pass


class SingularGeometryError(ValueError):
    pass


def kepler_propagate(state, mu, dt):
    """Propagate ``state`` by ``dt`` seconds on a Keplerian orbit about ``mu``.

    Universal-variable formulation, valid for every conic.  The returned
    state carries ``state.epoch + dt`` converted to days.
    """
    r0 = np.asarray(state.r, dtype=float)
    v0 = np.asarray(state.v, dtype=float)
    if not np.linalg.norm(r0) > 0.0:
        raise ValueError("degenerate state: |r| must be positive")
    r, v, status = _kernels.kepler_uv(r0, v0, float(mu), float(dt))
    if status != _kernels.OK:
        raise ConvergenceError("universal Kepler iteration did not converge in 100 iterations")
    return BodyState(r=r, v=v, epoch=state.epoch + dt / DAY)


def lambert(r1, r2, tof, mu, direction="prograde"):
    """Zero-revolution Lambert arc from ``r1`` to ``r2`` in ``tof`` seconds.

    ``direction`` selects the branch whose angular momentum has a positive
    (prograde) or negative (retrograde) ecliptic z component.

    Returns
    -------
    v1, v2 : ndarray
        Velocities at departure and arrival.
    """
    if direction not in ("prograde", "retrograde"):
        raise ValueError(f"direction must be 'prograde' or 'retrograde', got {direction!r}")
    if not tof > 0:
        raise ValueError(f"time of flight must be positive, got {tof}")
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    v1, v2, status = _kernels.lambert_uv(r1, r2, float(tof), float(mu), direction == "prograde")
    if status == _kernels.SINGULAR:
        raise SingularGeometryError("transfer angle within 1e-6 rad of 0 or pi")
    if status == _kernels.BAD_INPUT:
        raise ValueError("position vectors must be non-zero")
    if status != _kernels.OK:
        raise ConvergenceError("Lambert iteration did not converge")
    return v1, v2


def state_energy(r, v, mu):
    return 0.5 * float(np.dot(v, v)) - mu / float(np.linalg.norm(r))
