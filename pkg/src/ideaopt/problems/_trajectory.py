"""Compiled objective functions for the interplanetary transfer problems.

Both objectives take the body ephemeris rows as a 2-d array (one row per body
in the sequence) and return ``nan`` when any leg fails to converge.  ``out``
receives a breakdown of the cost, used by :func:`ideaopt.problems.breakdown`.
"""

from math import sqrt

import numpy as np
from numba import njit

from ..astro import _kernels as K
from ..astro.constants import DAY, MU_SUN


@njit(cache=True, error_model="numpy")
def _sign(x):
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


@njit(cache=True, error_model="numpy")
def mga_objective(t, rows, mus, radii, rp_min, weights, rp_insert, e_insert, out):
    """Multiple gravity assist with powered swing-bys.

    ``t`` holds the departure epoch and the leg times of flight (days).
    ``out`` layout: [dv_launch, dv_swingby..., dv_arrival, rp..., penalty].
    """
    n_legs = t.size - 1
    n_fb = n_legs - 1
    epoch = t[0]
    r_prev, v_prev = K.ephemeris_row(rows[0], epoch)
    v_arr = np.zeros(3)
    v_arr_planet = np.zeros(3)
    total = 0.0
    penalty = 0.0
    for leg in range(n_legs):
        epoch += t[leg + 1]
        r_next, v_next = K.ephemeris_row(rows[leg + 1], epoch)
        v1, v2, st = K.lambert_uv(r_prev, r_next, t[leg + 1] * DAY, MU_SUN, True)
        if st != K.OK:
            return np.nan
        if leg == 0:
            dv = K.norm3(v1 - v_prev)
            out[0] = dv
            total += dv
        else:
            dv, rp, st = K.powered_flyby(v_arr - v_arr_planet, v1 - v_arr_planet,
                                         mus[leg], radii[leg])
            if st != K.OK:
                return np.nan
            out[leg] = dv
            out[n_legs + 1 + leg - 1] = rp
            total += dv
            dr = rp - rp_min[leg - 1]
            penalty += weights[leg - 1] * (1.0 - _sign(dr)) * dr * dr
        v_arr = v2
        v_arr_planet = v_next
        r_prev = r_next
    vrel = K.norm3(v_arr - v_arr_planet)
    mu_t = mus[n_legs]
    dvf = abs(sqrt(vrel * vrel + 2.0 * mu_t / rp_insert) - sqrt(mu_t * (1.0 + e_insert) / rp_insert))
    out[n_legs] = dvf
    out[n_legs + 1 + n_fb] = penalty
    return total + dvf + penalty


@njit(cache=True, error_model="numpy")
def mga_batch(ts, rows, mus, radii, rp_min, weights, rp_insert, e_insert):
    m = ts.shape[0]
    res = np.empty(m)
    scratch = np.zeros(2 * ts.shape[1] + 1)
    for k in range(m):
        res[k] = mga_objective(ts[k], rows, mus, radii, rp_min, weights, rp_insert, e_insert,
                               scratch)
    return res


@njit(cache=True, error_model="numpy")
def dsm_leg(r_start, v_start, tof_days, alpha, r_target):
    """Coast for alpha*tof, then a Lambert arc to ``r_target``.

    Returns (dv_dsm, v_arrival, status).
    """
    r_m, v_m, st = K.kepler_uv(r_start, v_start, MU_SUN, alpha * tof_days * DAY)
    if st != K.OK:
        return np.nan, np.zeros(3), st
    v1, v2, st = K.lambert_uv(r_m, r_target, (1.0 - alpha) * tof_days * DAY, MU_SUN, True)
    if st != K.OK:
        return np.nan, np.zeros(3), st
    return K.norm3(v1 - v_m), v2, K.OK


@njit(cache=True, error_model="numpy")
def mgadsm_objective(x, rows, mus, radii, include_v0, out):
    """Multiple gravity assist with one deep-space manoeuvre per leg.

    ``x`` = [t0, v0, theta_bar, delta_bar, T_1..T_n, alpha_1..alpha_n,
    rp_1..rp_{n-1}, gamma_1..gamma_{n-1}].
    ``out`` layout: [v0, dsm_1..dsm_n, dv_arrival].
    """
    n = (x.size - 2) // 4
    t_i = 4
    a_i = 4 + n
    rp_i = 4 + 2 * n
    g_i = 4 + 3 * n - 1
    epoch = x[0]
    r_p, v_p = K.ephemeris_row(rows[0], epoch)
    v_sc = K.launch_velocity(x[1], x[2], x[3], r_p, v_p)
    total = x[1] if include_v0 else 0.0
    out[0] = x[1]
    r_start = r_p
    v_arr = np.zeros(3)
    for leg in range(n):
        if leg > 0:
            v_rel, st = K.unpowered_flyby(v_arr - v_p, v_p, x[rp_i + leg - 1] * radii[leg],
                                          x[g_i + leg - 1], mus[leg])
            if st != K.OK:
                return np.nan
            v_sc = v_p + v_rel
        tof = x[t_i + leg]
        epoch += tof
        r_next, v_next = K.ephemeris_row(rows[leg + 1], epoch)
        dv, v_arr, st = dsm_leg(r_start, v_sc, tof, x[a_i + leg], r_next)
        if st != K.OK:
            return np.nan
        out[1 + leg] = dv
        total += dv
        r_start = r_next
        r_p = r_next
        v_p = v_next
    dvf = K.norm3(v_arr - v_p)
    out[n + 1] = dvf
    return total + dvf


@njit(cache=True, error_model="numpy")
def mgadsm_batch(xs, rows, mus, radii, include_v0):
    m = xs.shape[0]
    res = np.empty(m)
    scratch = np.zeros(xs.shape[1])
    for k in range(m):
        res[k] = mgadsm_objective(xs[k], rows, mus, radii, include_v0, scratch)
    return res
