from pressure_lab.orbits.search import find_periodic_orbits, linear_point_counts, orbit_distance
from pressure_lab.orbits.spectrum import (
    build_orbit,
    classify,
    delta,
    delta_phi,
    inverse_orbit,
    orbit_average,
    orbit_from_multiplier,
    orbit_lyapunov,
    orbit_sigma_k,
)

__all__ = [
    "find_periodic_orbits",
    "linear_point_counts",
    "orbit_distance",
    "build_orbit",
    "classify",
    "delta",
    "delta_phi",
    "inverse_orbit",
    "orbit_average",
    "orbit_from_multiplier",
    "orbit_lyapunov",
    "orbit_sigma_k",
]
