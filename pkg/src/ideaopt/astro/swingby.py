"""Linked-conic gravity assists and launch asymptotes."""

import numpy as np

from . import _kernels


class DegenerateGeometryError(ValueError):
    pass


def turn_angle(r_p, v_inf, mu, radius):
    """Deflection of a hyperbolic flyby with normalized pericenter ``r_p``."""
    return 2.0 * np.arcsin(1.0 / (1.0 + r_p * radius * v_inf ** 2 / mu))


def unpowered_swingby(v_in_rel, v_planet, r_p, gamma, mu_planet, r_planet):
    """Outgoing planet-relative velocity of an unpowered swing-by.

    The hyperbola turns the incoming asymptote by the angle fixed by
    ``r_p`` (planet radii) and the incoming speed.  ``gamma`` orients the
    hyperbola plane: the outgoing direction is
    ``cos(d) b1 + sin(d) (sin(gamma) b2 + cos(gamma) b3)`` with ``b1`` along
    the incoming asymptote, ``b2`` normal to the plane of ``v_in_rel`` and
    ``v_planet``, and ``b3 = b1 x b2``.
    """
    if r_p < 1.0:
        raise ValueError(f"pericenter radius must be >= 1 planet radius, got {r_p}")
    v_in_rel = np.asarray(v_in_rel, dtype=float)
    v_planet = np.asarray(v_planet, dtype=float)
    out, status = _kernels.unpowered_flyby(v_in_rel, v_planet, float(r_p) * r_planet,
                                           float(gamma), float(mu_planet))
    if status == _kernels.BAD_INPUT:
        raise DegenerateGeometryError("incoming relative velocity is zero")
    if status != _kernels.OK:
        raise DegenerateGeometryError("incoming relative velocity is parallel to the planet velocity")
    return out


def powered_swingby_dv(v_in_rel, v_out_rel_required, mu_planet, r_planet):
    """Pericenter burn needed to turn ``v_in_rel`` into ``v_out_rel_required``.

    Returns ``(dv, r_p)`` with ``r_p`` normalized by the planet radius.  The
    pericenter is found by a bracketed root solve on the total turn angle of
    the two half-hyperbolas; it may come out below 1 when the turn is too
    large for a physical flyby, and is ``inf`` for a zero turn.  A failed
    solve gives ``(nan, nan)``.
    """
    v_in_rel = np.asarray(v_in_rel, dtype=float)
    v_out_rel_required = np.asarray(v_out_rel_required, dtype=float)
    dv, rp, status = _kernels.powered_flyby(v_in_rel, v_out_rel_required,
                                            float(mu_planet), float(r_planet))
    if status == _kernels.BAD_INPUT:
        raise DegenerateGeometryError("relative velocities must be non-zero")
    return dv, rp


def launch_asymptote(v0, theta_bar, delta_bar, planet):
    """Heliocentric velocity leaving ``planet`` with excess speed ``v0``.

    ``theta_bar`` and ``delta_bar`` in [0, 1] map to azimuth
    ``2 pi theta_bar - pi/2`` and elevation ``acos(2 delta_bar - 1) - pi/2`` in
    a frame with x along the planet velocity and z along its orbital angular
    momentum.  ``(0.25, 0.5)`` points along the planet velocity, and uniform
    samples of the pair cover the sphere uniformly.
    """
    if v0 < 0:
        raise ValueError("v0 must be non-negative")
    return _kernels.launch_velocity(float(v0), float(theta_bar), float(delta_bar),
                                    np.asarray(planet.r, dtype=float),
                                    np.asarray(planet.v, dtype=float))
