"""Mean-element ephemerides for the planets and comet 67P."""

import os
from dataclasses import dataclass
from functools import lru_cache
from math import radians, sqrt
from pathlib import Path

import numpy as np

from . import _kernels
from .constants import AU, JULIAN_CENTURY

DATA_ENV = "IDEAOPT_DATA_DIR"
EPHEMERIS_FILE = "ephemerides.txt"
_MAX_SPAN_DAYS = 200 * 365.25


class UnknownBodyError(KeyError):
    pass


@dataclass(frozen=True)
class BodyState:
    """Heliocentric position [km], velocity [km/s] and epoch [MJD2000]."""

    r: np.ndarray
    v: np.ndarray
    epoch: float


@dataclass(frozen=True)
class OrbitalElements:
    """Classical elements (a in km, angles in rad) at ``epoch`` about ``mu``."""

    a: float
    e: float
    i: float
    raan: float
    argp: float
    mean_anomaly: float
    epoch: float
    mu: float


def data_dir():
    """Directory holding the ephemeris table (overridable via IDEAOPT_DATA_DIR)."""
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(__file__).parent / "data"


def _find_table():
    path = data_dir() / EPHEMERIS_FILE
    if not path.exists():
        path = Path(__file__).parent / "data" / EPHEMERIS_FILE
    return path


def parse_table(text):
    """Parse the ephemeris text format into ``{name: row}``.

    Rows follow the layout expected by :func:`_kernels.ephemeris_row`:
    km, radians and per-day rates.
    """
    rows = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        cols = line.split()
        if len(cols) != 15:
            raise ValueError(f"ephemeris line {lineno}: expected 15 columns, got {len(cols)}")
        name = cols[0].lower()
        epoch = float(cols[1])
        a_au, e, inc, mean_lon, varpi, raan = (float(c) for c in cols[2:8])
        da, de, di, dvarpi, draan = (float(cols[k]) for k in (8, 9, 10, 12, 13))
        mu = float(cols[14])
        a_km = a_au * AU
        if cols[11].lower() == "kepler":
            dl = sqrt(mu / a_km ** 3) * 86400.0  # rad/day
        else:
            dl = radians(float(cols[11])) / JULIAN_CENTURY
        rows[name] = np.array([
            epoch, a_km, e, radians(inc), radians(mean_lon), radians(varpi), radians(raan),
            da * AU / JULIAN_CENTURY, de / JULIAN_CENTURY, radians(di) / JULIAN_CENTURY,
            dl, radians(dvarpi) / JULIAN_CENTURY, radians(draan) / JULIAN_CENTURY, mu,
        ])
    return rows


@lru_cache(maxsize=None)
def load_table(path=None):
    path = Path(path) if path is not None else _find_table()
    return parse_table(path.read_text())


# General precession in longitude, rad/day.
PRECESSION_RATE = radians(5029.0966 / 3600.0) / JULIAN_CENTURY

FRAMES = ("j2000", "date")
TIME_ORIGINS = {"midnight": 0.0, "noon": 0.5}


def body_row(body, frame="j2000", origin="midnight"):
    """Kernel row for ``body`` under the requested conventions.

    ``frame="date"`` refers longitudes to the mean equinox of date (the
    frame is then treated as inertial).  ``origin="noon"`` counts epochs
    from 2000-01-01 12:00 instead of 00:00.
    """
    table = load_table()
    try:
        row = table[body.lower()].copy()
    except KeyError:
        raise UnknownBodyError(f"unknown body {body!r}; known: {sorted(table)}") from None
    if frame not in FRAMES:
        raise ValueError(f"frame must be one of {FRAMES}")
    try:
        row[0] -= TIME_ORIGINS[origin]
    except KeyError:
        raise ValueError(f"origin must be one of {sorted(TIME_ORIGINS)}") from None
    if frame == "date":
        row[10:13] += PRECESSION_RATE
    return row


def bodies():
    return sorted(load_table())


def elements(body, epoch, frame="j2000", origin="midnight"):
    """Mean orbital elements of ``body`` at ``epoch`` (MJD2000)."""
    row = body_row(body, frame, origin)
    dt = epoch - row[0]
    a, e, inc, mean_lon, varpi, raan = (row[k] + row[k + 6] * dt for k in range(1, 7))
    return OrbitalElements(a=a, e=e, i=inc, raan=raan, argp=varpi - raan,
                           mean_anomaly=mean_lon - varpi, epoch=epoch, mu=row[13])


def ephemeris(body, epoch, frame="j2000", origin="midnight"):
    """Heliocentric ecliptic state of ``body`` at ``epoch`` (MJD2000)."""
    row = body_row(body, frame, origin)
    if not np.isfinite(epoch) or abs(epoch) > _MAX_SPAN_DAYS:
        raise ValueError(f"epoch {epoch} MJD2000 is outside +/-200 years of J2000")
    r, v = _kernels.ephemeris_row(row, float(epoch))
    return BodyState(r=r, v=v, epoch=float(epoch))


def state_to_row(r, v, epoch, mu):
    """Kernel row for a body moving on the fixed conic through (r, v) at ``epoch``."""
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    rn = np.linalg.norm(r)
    h = np.cross(r, v)
    node = np.cross([0.0, 0.0, 1.0], h)
    e_vec = np.cross(v, h) / mu - r / rn
    e = np.linalg.norm(e_vec)
    a = 1.0 / (2.0 / rn - v @ v / mu)
    if not (a > 0.0 and e < 1.0):
        raise ValueError("state is not on a closed orbit")
    inc = np.arccos(np.clip(h[2] / np.linalg.norm(h), -1.0, 1.0))
    nn = np.linalg.norm(node)
    raan = np.arctan2(node[1], node[0]) if nn > 0.0 else 0.0
    if e > 1e-12:
        varpi = raan + _angle_in_plane(node if nn > 0.0 else np.array([1.0, 0.0, 0.0]), e_vec, h)
    else:
        varpi = raan
    # true anomaly measured from perihelion (or the node for circular orbits)
    ref = e_vec if e > 1e-12 else (node if nn > 0.0 else np.array([1.0, 0.0, 0.0]))
    nu = _angle_in_plane(ref, r, h)
    ecc_anom = 2.0 * np.arctan2(np.sqrt(1.0 - e) * np.sin(nu / 2.0),
                                np.sqrt(1.0 + e) * np.cos(nu / 2.0))
    mean_anom = ecc_anom - e * np.sin(ecc_anom)
    n = sqrt(mu / a ** 3) * 86400.0
    return np.array([epoch, a, e, inc, varpi + mean_anom, varpi, raan,
                     0.0, 0.0, 0.0, n, 0.0, 0.0, mu])


def _angle_in_plane(a, b, h):
    """Angle from a to b measured counterclockwise about h."""
    return np.arctan2(np.dot(np.cross(a, b), h) / np.linalg.norm(h), np.dot(a, b))
