"""Compiled two-body kernels.

Everything here is ``numba.njit`` and reports failure through an integer
status instead of raising, so the trajectory objectives can call these in a
tight loop and turn failures into a non-finite objective value.  The public,
exception-raising wrappers live in :mod:`ideaopt.astro.orbits`,
:mod:`ideaopt.astro.ephemeris` and :mod:`ideaopt.astro.swingby`.
"""

from math import acos, acosh, asin, asinh, atan2, cos, log, pi, sin, sinh, sqrt

import numpy as np
from numba import njit

OK = 0
NO_CONVERGENCE = 1
SINGULAR = 2
BAD_INPUT = 3

TWO_PI = 2.0 * pi


@njit(cache=True, error_model="numpy")
def dot3(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


@njit(cache=True, error_model="numpy")
def norm3(a):
    return sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


@njit(cache=True, error_model="numpy")
def cross3(a, b):
    out = np.empty(3)
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]
    return out


@njit(cache=True, error_model="numpy")
def stumpff_c(z):
    if z > 1e-3:
        s = sqrt(z)
        h = sin(0.5 * s)
        return 2.0 * h * h / z
    if z < -1e-3:
        s = sqrt(-z)
        h = sinh(0.5 * s)
        return 2.0 * h * h / (-z)
    return 0.5 - z / 24.0 + z * z / 720.0 - z * z * z / 40320.0 + z ** 4 / 3628800.0


@njit(cache=True, error_model="numpy")
def stumpff_s(z):
    if z > 0.1:
        s = sqrt(z)
        return (s - sin(s)) / (s * s * s)
    if z < -0.1:
        s = sqrt(-z)
        return (sinh(s) - s) / (s * s * s)
    return (1.0 / 6.0 - z / 120.0 + z * z / 5040.0 - z ** 3 / 362880.0
            + z ** 4 / 39916800.0 - z ** 5 / 6227020800.0)


# ---------------------------------------------------------------------------
# Kepler propagation (universal variables)
# ---------------------------------------------------------------------------

@njit(cache=True, error_model="numpy")
def _kepler_residual(chi, r0n, vr0, alpha, sqmu, dt):
    z = alpha * chi * chi
    c = stumpff_c(z)
    s = stumpff_s(z)
    f = (r0n * vr0 / sqmu * chi * chi * c + (1.0 - alpha * r0n) * chi ** 3 * s
         + r0n * chi - sqmu * dt)
    df = (r0n * vr0 / sqmu * chi * (1.0 - z * s) + (1.0 - alpha * r0n) * chi * chi * c
          + r0n)
    return f, df


@njit(cache=True, error_model="numpy")
def kepler_uv(r0, v0, mu, dt, max_iter=100):
    """Propagate (r0, v0) by dt seconds. Returns (r, v, status)."""
    r = r0.copy()
    v = v0.copy()
    if dt == 0.0:
        return r, v, OK
    r0n = norm3(r0)
    if not r0n > 0.0:
        return r, v, BAD_INPUT
    v0n = norm3(v0)
    sqmu = sqrt(mu)
    vr0 = dot3(r0, v0) / r0n
    alpha = 2.0 / r0n - v0n * v0n / mu

    # F(chi) is strictly increasing (dF/dchi = r > 0), so a bracket plus
    # safeguarded Newton always converges.
    sgn = 1.0 if dt > 0.0 else -1.0
    if alpha > 1e-12:
        guess = sqmu * alpha * dt
    elif alpha < -1e-12:
        a = 1.0 / alpha
        arg = (-2.0 * mu * alpha * dt) / (dot3(r0, v0) + sgn * sqrt(-mu * a) * (1.0 - r0n * alpha))
        if arg > 0.0:
            guess = sgn * sqrt(-a) * log(arg)
        else:
            guess = sqmu * dt / r0n
    else:
        guess = sqmu * dt / r0n
    if guess * sgn <= 0.0:
        guess = sgn * 1e-6 * (1.0 + abs(sqmu * dt / r0n))

    lo = 0.0
    hi = guess
    f_hi, _ = _kepler_residual(hi, r0n, vr0, alpha, sqmu, dt)
    n_expand = 0
    while f_hi * sgn <= 0.0:
        lo = hi
        hi = 2.0 * hi
        f_hi, _ = _kepler_residual(hi, r0n, vr0, alpha, sqmu, dt)
        n_expand += 1
        if n_expand > 200 or not np.isfinite(f_hi):
            return r, v, NO_CONVERGENCE
    if sgn < 0.0:
        lo, hi = hi, lo  # keep lo < hi on the chi axis

    chi = guess if lo < guess < hi else 0.5 * (lo + hi)
    converged = False
    for _ in range(max_iter):
        f, df = _kepler_residual(chi, r0n, vr0, alpha, sqmu, dt)
        if f == 0.0:
            converged = True
            break
        if f < 0.0:
            lo = chi
        else:
            hi = chi
        step = f / df
        new = chi - step
        if not (lo < new < hi):
            new = 0.5 * (lo + hi)
        if abs(new - chi) <= 1e-15 * max(1.0, abs(chi)):
            chi = new
            converged = True
            break
        chi = new
    if not converged:
        return r, v, NO_CONVERGENCE

    z = alpha * chi * chi
    c = stumpff_c(z)
    s = stumpff_s(z)
    f = 1.0 - chi * chi / r0n * c
    g = dt - chi ** 3 / sqmu * s
    for k in range(3):
        r[k] = f * r0[k] + g * v0[k]
    rn = norm3(r)
    fdot = sqmu / (rn * r0n) * (z * s - 1.0) * chi
    gdot = 1.0 - chi * chi / rn * c
    for k in range(3):
        v[k] = fdot * r0[k] + gdot * v0[k]
    return r, v, OK


# ---------------------------------------------------------------------------
# Lambert problem (zero revolutions, Householder iteration on Izzo's x)
# ---------------------------------------------------------------------------

@njit(cache=True, error_model="numpy")
def _hypergeometric_f(z, tol):
    sj = 1.0
    cj = 1.0
    j = 0
    err = 1.0
    while err > tol and j < 1000:
        cj = cj * (3.0 + j) * (1.0 + j) / (2.5 + j) * z / (j + 1.0)
        sj += cj
        err = abs(cj)
        j += 1
    return sj


@njit(cache=True, error_model="numpy")
def _x2tof(x, lam):
    """Non-dimensional time of flight of the zero-revolution arc."""
    dist = abs(x - 1.0)
    if 0.01 < dist < 0.2:
        # Lagrange form, well conditioned away from the parabola
        a = 1.0 / (1.0 - x * x)
        if a > 0.0:
            alfa = 2.0 * acos(x)
            beta = 2.0 * asin(sqrt(lam * lam / a))
            if lam < 0.0:
                beta = -beta
            return a * sqrt(a) * ((alfa - sin(alfa)) - (beta - sin(beta))) / 2.0
        alfa = 2.0 * acosh(x)
        beta = 2.0 * asinh(sqrt(-lam * lam / a))
        if lam < 0.0:
            beta = -beta
        return -a * sqrt(-a) * ((beta - sinh(beta)) - (alfa - sinh(alfa))) / 2.0
    e = x * x - 1.0
    z = sqrt(1.0 + lam * lam * e)
    if dist <= 0.01:
        eta = z - lam * x
        s1 = 0.5 * (1.0 - lam - x * eta)
        q = 4.0 / 3.0 * _hypergeometric_f(s1, 1e-11)
        return (eta ** 3 * q + 4.0 * lam * eta) / 2.0
    y = sqrt(abs(e))
    g = x * z - lam * e
    if e < 0.0:
        d = acos(min(1.0, max(-1.0, g)))
    else:
        d = log(y * (z - lam * x) + g)
    return (x - lam * z - d / y) / e


@njit(cache=True, error_model="numpy")
def _tof_derivatives(x, t, lam):
    l2 = lam * lam
    l3 = l2 * lam
    umx2 = 1.0 - x * x
    y = sqrt(1.0 - l2 * umx2)
    y2 = y * y
    y3 = y2 * y
    dt = (3.0 * t * x - 2.0 + 2.0 * l3 * x / y) / umx2
    ddt = (3.0 * t + 5.0 * x * dt + 2.0 * (1.0 - l2) * l3 / y3) / umx2
    dddt = (7.0 * x * ddt + 8.0 * dt - 6.0 * (1.0 - l2) * l2 * l3 * x / y3 / y2) / umx2
    return dt, ddt, dddt


@njit(cache=True, error_model="numpy")
def lambert_uv(r1, r2, tof, mu, prograde=True, max_iter=50):
    """Zero-revolution Lambert arc. Returns (v1, v2, status)."""
    v1 = np.zeros(3)
    v2 = np.zeros(3)
    if not (tof > 0.0 and mu > 0.0):
        return v1, v2, BAD_INPUT
    r1n = norm3(r1)
    r2n = norm3(r2)
    if not (r1n > 0.0 and r2n > 0.0):
        return v1, v2, BAD_INPUT
    ir1 = r1 / r1n
    ir2 = r2 / r2n
    ih = cross3(ir1, ir2)
    ihn = norm3(ih)
    # transfer plane undefined at 0, pi and 2 pi
    if ihn < 1e-6:
        return v1, v2, SINGULAR
    ih = ih / ihn
    c = norm3(r2 - r1)
    s = 0.5 * (r1n + r2n + c)
    lam = sqrt(max(0.0, 1.0 - c / s))
    if ih[2] < 0.0:
        lam = -lam
        it1 = cross3(ir1, ih)
        it2 = cross3(ir2, ih)
    else:
        it1 = cross3(ih, ir1)
        it2 = cross3(ih, ir2)
    if not prograde:
        lam = -lam
        it1 = -it1
        it2 = -it2
    t_target = sqrt(2.0 * mu / s ** 3) * tof

    lam2 = lam * lam
    t00 = acos(lam) + lam * sqrt(1.0 - lam2)
    t1 = 2.0 / 3.0 * (1.0 - lam2 * lam)
    if t_target >= t00:
        x = (t00 / t_target) ** (2.0 / 3.0) - 1.0
    elif t_target <= t1:
        x = 2.5 * t1 / t_target * (t1 - t_target) / (1.0 - lam2 * lam2 * lam) + 1.0
    else:
        # maps t00 -> 0 and t1 -> 1
        x = (t00 / t_target) ** (log(2.0) / log(t00 / t1)) - 1.0

    converged = False
    err = np.inf
    for _ in range(max_iter):
        t = _x2tof(x, lam)
        dt, ddt, dddt = _tof_derivatives(x, t, lam)
        delta = t - t_target
        dt2 = dt * dt
        den = dt * (dt2 - delta * ddt) + dddt * delta * delta / 6.0
        if den == 0.0 or not np.isfinite(den):
            break
        xnew = x - delta * (dt2 - delta * ddt / 2.0) / den
        if not np.isfinite(xnew):
            break
        if xnew <= -1.0:
            xnew = 0.5 * (x - 1.0)
        err = abs(x - xnew)
        x = xnew
        if err < 1e-13 * max(1.0, abs(x)):
            converged = True
            break
    if not (converged or err < 1e-9 * max(1.0, abs(x))):
        return v1, v2, NO_CONVERGENCE
    if not abs(_x2tof(x, lam) - t_target) <= 1e-9 * t_target:
        return v1, v2, NO_CONVERGENCE

    gamma = sqrt(mu * s / 2.0)
    rho = (r1n - r2n) / c
    sigma = sqrt(max(0.0, 1.0 - rho * rho))
    y = sqrt(1.0 - lam2 + lam2 * x * x)
    vr1 = gamma * ((lam * y - x) - rho * (lam * y + x)) / r1n
    vr2 = -gamma * ((lam * y - x) + rho * (lam * y + x)) / r2n
    vt = gamma * sigma * (y + lam * x)
    vt1 = vt / r1n
    vt2 = vt / r2n
    for k in range(3):
        v1[k] = vr1 * ir1[k] + vt1 * it1[k]
        v2[k] = vr2 * ir2[k] + vt2 * it2[k]
    return v1, v2, OK


# ---------------------------------------------------------------------------
# Element sets and ephemerides
# ---------------------------------------------------------------------------

@njit(cache=True, error_model="numpy")
def eccentric_anomaly(m, e):
    """Solve Kepler's equation E - e sin E = M (elliptic)."""
    m = (m + pi) % TWO_PI - pi
    ecc = m + e * sin(m) if e < 0.8 else (pi if m > 0.0 else -pi)
    for _ in range(60):
        f = ecc - e * sin(ecc) - m
        step = f / (1.0 - e * cos(ecc))
        ecc -= step
        if abs(step) < 1e-15:
            break
    return ecc


@njit(cache=True, error_model="numpy")
def elements_to_state(a, e, inc, raan, argp, ecc_anom, mu):
    """Cartesian state from classical elements with eccentric anomaly."""
    cE = cos(ecc_anom)
    sE = sin(ecc_anom)
    b = a * sqrt(1.0 - e * e)
    xp = a * (cE - e)
    yp = b * sE
    n = sqrt(mu / (a * a * a))
    rdot = n * a / (1.0 - e * cE)
    vxp = -a * sE * rdot / a
    vyp = b * cE * rdot / a

    cO = cos(raan)
    sO = sin(raan)
    cw = cos(argp)
    sw = sin(argp)
    ci = cos(inc)
    si = sin(inc)
    p0 = cO * cw - sO * sw * ci
    p1 = sO * cw + cO * sw * ci
    p2 = sw * si
    q0 = -cO * sw - sO * cw * ci
    q1 = -sO * sw + cO * cw * ci
    q2 = cw * si
    r = np.empty(3)
    v = np.empty(3)
    r[0] = p0 * xp + q0 * yp
    r[1] = p1 * xp + q1 * yp
    r[2] = p2 * xp + q2 * yp
    v[0] = p0 * vxp + q0 * vyp
    v[1] = p1 * vxp + q1 * vyp
    v[2] = p2 * vxp + q2 * vyp
    return r, v


# Row layout of an ephemeris table (all angles in radians, a in km, rates
# per day):
#   0 epoch, 1 a, 2 e, 3 i, 4 L, 5 varpi, 6 Omega,
#   7 da, 8 de, 9 di, 10 dL, 11 dvarpi, 12 dOmega, 13 mu

@njit(cache=True, error_model="numpy")
def ephemeris_row(row, t):
    """Heliocentric (r [km], v [km/s]) of one table row at MJD2000 t."""
    dt = t - row[0]
    a = row[1] + row[7] * dt
    e = row[2] + row[8] * dt
    inc = row[3] + row[9] * dt
    mean_lon = row[4] + row[10] * dt
    varpi = row[5] + row[11] * dt
    raan = row[6] + row[12] * dt
    ecc = eccentric_anomaly(mean_lon - varpi, e)
    return elements_to_state(a, e, inc, raan, varpi - raan, ecc, row[13])


# ---------------------------------------------------------------------------
# Swing-bys
# ---------------------------------------------------------------------------

@njit(cache=True, error_model="numpy")
def unpowered_flyby(v_in_rel, v_planet, rp_km, gamma, mu):
    """Outgoing relative velocity of an unpowered swing-by. Returns (v, status)."""
    out = np.zeros(3)
    vin = norm3(v_in_rel)
    if not vin > 0.0:
        return out, BAD_INPUT
    ecc = 1.0 + rp_km / mu * vin * vin
    delta = 2.0 * asin(1.0 / ecc)
    b1 = v_in_rel / vin
    b2 = cross3(b1, v_planet)
    nb2 = norm3(b2)
    if nb2 < 1e-12 * norm3(v_planet) or nb2 == 0.0:
        return out, SINGULAR
    b2 = b2 / nb2
    b3 = cross3(b1, b2)
    cd = cos(delta)
    sd = sin(delta)
    cg = cos(gamma)
    sg = sin(gamma)
    # gamma = 0 puts the turn along b3 = b1 x (b1 x v_planet)
    for k in range(3):
        out[k] = vin * (cd * b1[k] + sg * sd * b2[k] + cg * sd * b3[k])
    return out, OK


@njit(cache=True, error_model="numpy")
def _turn_residual(rp, a_in, a_out, alpha):
    g = asin(a_in / (a_in + rp)) + asin(a_out / (a_out + rp)) - alpha
    dg = (-a_in / ((a_in + rp) * sqrt(rp * (rp + 2.0 * a_in)))
          - a_out / ((a_out + rp) * sqrt(rp * (rp + 2.0 * a_out))))
    return g, dg


@njit(cache=True, error_model="numpy")
def powered_flyby(v_in_rel, v_out_rel, mu, radius, rp_lower=1e-8, rp_upper=1e5):
    """Pericenter burn linking two hyperbolic asymptotes.

    Works in units where mu = 1 and lengths are planet radii, so the
    returned pericenter is normalized by ``radius``.  Returns
    (dv [km/s], rp, status).
    """
    vin = norm3(v_in_rel)
    vout = norm3(v_out_rel)
    if not (vin > 0.0 and vout > 0.0):
        return np.nan, np.nan, BAD_INPUT
    cosa = dot3(v_in_rel, v_out_rel) / (vin * vout)
    if cosa > 1.0:
        cosa = 1.0
    elif cosa < -1.0:
        cosa = -1.0
    alpha = acos(cosa)
    if alpha == 0.0:
        return abs(vout - vin), np.inf, OK

    vscale = sqrt(mu / radius)
    a_in = 1.0 / (vin / vscale) ** 2
    a_out = 1.0 / (vout / vscale) ** 2

    # total turn angle decreases monotonically with rp, from pi at rp -> 0
    lo = rp_lower
    hi = rp_upper
    g_lo, _ = _turn_residual(lo, a_in, a_out, alpha)
    if g_lo < 0.0:
        return np.nan, np.nan, NO_CONVERGENCE
    g_hi, _ = _turn_residual(hi, a_in, a_out, alpha)
    n = 0
    while g_hi > 0.0:
        lo = hi
        hi *= 10.0
        g_hi, _ = _turn_residual(hi, a_in, a_out, alpha)
        n += 1
        if n > 30:
            return np.nan, np.nan, NO_CONVERGENCE

    rp = sqrt(lo * hi)
    converged = False
    for _ in range(200):
        g, dg = _turn_residual(rp, a_in, a_out, alpha)
        if g == 0.0:
            converged = True
            break
        if g > 0.0:
            lo = rp
        else:
            hi = rp
        new = rp - g / dg
        if not (lo < new < hi):
            new = sqrt(lo * hi)
        if abs(new - rp) <= 1e-13 * rp:
            rp = new
            converged = True
            break
        rp = new
        if hi - lo <= 1e-14 * hi:
            converged = True
            break
    if not converged:
        return np.nan, np.nan, NO_CONVERGENCE

    rp_km = rp * radius
    dv = abs(sqrt(vout * vout + 2.0 * mu / rp_km) - sqrt(vin * vin + 2.0 * mu / rp_km))
    return dv, rp, OK


@njit(cache=True, error_model="numpy")
def launch_velocity(v0, theta_bar, delta_bar, r_planet, v_planet):
    """Heliocentric velocity after departure with hyperbolic excess v0."""
    # azimuth is measured from -j_hat, so theta_bar = 0.25 points along v_planet
    theta = TWO_PI * theta_bar - 0.5 * pi
    x = 2.0 * delta_bar - 1.0
    if x > 1.0:
        x = 1.0
    elif x < -1.0:
        x = -1.0
    phi = acos(x) - 0.5 * pi
    i_hat = v_planet / norm3(v_planet)
    k_hat = cross3(r_planet, v_planet)
    k_hat = k_hat / norm3(k_hat)
    j_hat = cross3(k_hat, i_hat)
    cp = cos(phi)
    out = np.empty(3)
    for k in range(3):
        out[k] = v_planet[k] + v0 * (cos(theta) * cp * i_hat[k] + sin(theta) * cp * j_hat[k]
                                     + sin(phi) * k_hat[k])
    return out


@njit(cache=True, error_model="numpy")
def angle_between(a, b):
    return atan2(norm3(cross3(a, b)), dot3(a, b))
