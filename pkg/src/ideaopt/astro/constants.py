"""Physical constants shared by the astrodynamics kernel.

Values are the IAU 2012 astronomical unit, the DE430-era solar and planetary
gravitational parameters (JPL Solar System Dynamics, "Planetary physical
parameters"), and IAU equatorial radii.  Everything is in km, s, and days.
"""

AU = 149597870.7  # km
DAY = 86400.0  # s
JULIAN_CENTURY = 36525.0  # days
MJD2000_TO_JD = 2451544.5

MU_SUN = 1.32712440018e11  # km^3/s^2

# name -> (mu [km^3/s^2], equatorial radius [km])
PLANETS = {
    "mercury": (22031.86855, 2440.53),
    "venus": (324858.592, 6051.8),
    "earth": (398600.435436, 6378.1366),
    "mars": (42828.375214, 3396.19),
    "jupiter": (126712764.8, 71492.0),
    "saturn": (37940585.2, 60268.0),
}


def planet_mu(name):
    return PLANETS[name.lower()][0]


def planet_radius(name):
    return PLANETS[name.lower()][1]
