"""Astrodynamics kernel: ephemerides, Kepler propagation, Lambert, swing-bys."""

from .ephemeris import BodyState, OrbitalElements, UnknownBodyError, ephemeris, elements
from .orbits import ConvergenceError, SingularGeometryError, kepler_propagate, lambert
from .swingby import (DegenerateGeometryError, launch_asymptote, powered_swingby_dv,
                      turn_angle, unpowered_swingby)

__all__ = [
    "BodyState", "OrbitalElements", "UnknownBodyError", "ephemeris", "elements",
    "ConvergenceError", "SingularGeometryError", "kepler_propagate", "lambert",
    "DegenerateGeometryError", "launch_asymptote", "powered_swingby_dv", "turn_angle",
    "unpowered_swingby",
]
