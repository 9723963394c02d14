import math

import pytest

from pressure_lab.models import OrbitCatalog
from pressure_lab.orbits.search import find_periodic_orbits
from pressure_lab.orbits.spectrum import build_orbit
from pressure_lab.systems.maps import StandardMap, cat_map


@pytest.fixture(scope="session")
def cat():
    return cat_map()


@pytest.fixture(scope="session")
def standard():
    return StandardMap(K=1.0)


@pytest.fixture(scope="session")
def cat_catalog(cat):
    return find_periodic_orbits(cat, max_period=3, grid_density=64, seed=0)


@pytest.fixture(scope="session")
def standard_fixed_points(standard):
    """The two fixed points of the K = 1 standard map: the saddle (0, 0) and the elliptic (pi, 0)."""
    orbits = (
        build_orbit(standard, (0.0, 0.0), 1, orbit_id="T1-0"),
        build_orbit(standard, (math.pi, 0.0), 1, orbit_id="T1-1"),
    )
    return OrbitCatalog(
        system=standard,
        max_period=1,
        grid_density=0,
        seed=0,
        newton_iterations=0,
        orbits=orbits,
        exhaustive=True,
    )
