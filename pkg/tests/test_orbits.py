import math

import numpy as np
import pytest

from pressure_lab.models import OrbitClass
from pressure_lab.orbits.search import (
    canonical_points,
    find_periodic_orbits,
    is_minimal_period,
    linear_point_counts,
    orbit_distance,
)
from pressure_lab.orbits.spectrum import (
    build_orbit,
    classify,
    delta,
    delta_phi,
    elliptic_argument,
    inverse_orbit,
    orbit_from_multiplier,
    orbit_lyapunov,
)
from pressure_lab.systems.dynamics import torus_distance
from pressure_lab.systems.maps import ShearMap, cat_map
from pressure_lab.systems.potentials import constant

LOG_LAMBDA = 0.9624236501192069

# |det(A^n - I)| for the cat map, n = 1..4
CAT_POINT_COUNTS = {1: 1, 2: 5, 3: 16, 4: 45}


@pytest.fixture(scope="module")
def cat_catalog_4(cat):
    return find_periodic_orbits(cat, max_period=4, grid_density=64, seed=0)


@pytest.fixture(scope="module")
def standard_catalog(standard):
    return find_periodic_orbits(standard, max_period=2, grid_density=32, seed=1)


def test_linear_point_counts():
    assert linear_point_counts(cat_map(), 4) == CAT_POINT_COUNTS


def test_cat_map_point_counts(cat_catalog_4):
    for n, expected in CAT_POINT_COUNTS.items():
        assert cat_catalog_4.point_count(n) == expected
        assert cat_catalog_4.count_check[n] == (expected, expected)
    assert cat_catalog_4.exhaustive
    assert not cat_catalog_4.truncated


def test_cat_map_orbits_per_period(cat_catalog_4):
    # 1 fixed point, 2 orbits of period 2, 5 of period 3, 10 of period 4
    periods = [o.period for o in cat_catalog_4.orbits]
    assert [periods.count(p) for p in (1, 2, 3, 4)] == [1, 2, 5, 10]


def test_catalog_order_and_ids(cat_catalog):
    periods = [o.period for o in cat_catalog.orbits]
    assert periods == sorted(periods)
    assert cat_catalog.orbits[0].orbit_id == "T1-0"
    assert [o.orbit_id for o in cat_catalog.orbits if o.period == 2] == ["T2-0", "T2-1"]
    assert len({o.orbit_id for o in cat_catalog.orbits}) == len(cat_catalog.orbits)


def test_catalog_orbits_close_up(cat_catalog):
    for o in cat_catalog.orbits:
        assert o.residual <= 1e-10
        assert o.classification == OrbitClass.SADDLE
        assert is_minimal_period(cat_catalog.system, np.array(o.point), o.period)
        assert delta(o) == pytest.approx(LOG_LAMBDA, abs=1e-9)


def test_catalog_points_are_canonical(cat_catalog):
    for o in cat_catalog.orbits:
        pts = canonical_points(cat_catalog.system, np.array(o.point), o.period)
        assert pts[0] == pytest.approx(np.array(o.point))
        assert tuple(pts[0]) == min(tuple(p) for p in pts)


def test_search_is_deterministic_across_threads(cat):
    serial = find_periodic_orbits(cat, max_period=3, grid_density=32, seed=5, threads=1)
    threaded = find_periodic_orbits(cat, max_period=3, grid_density=32, seed=5, threads=4)
    assert serial == threaded


def test_seed_truncation_is_flagged(cat):
    catalog = find_periodic_orbits(cat, max_period=1, grid_density=64, seed=0, max_seeds=100)
    assert catalog.truncated
    assert not catalog.exhaustive
    assert any("truncated" in w for w in catalog.warnings)


def test_invalid_search_arguments(cat):
    with pytest.raises(ValueError):
        find_periodic_orbits(cat, max_period=0, grid_density=16, seed=0)
    with pytest.raises(ValueError):
        find_periodic_orbits(cat, max_period=1, grid_density=1, seed=0)


def test_standard_map_fixed_points(standard):
    catalog = find_periodic_orbits(standard, max_period=1, grid_density=16, seed=3)
    assert len(catalog.orbits) == 2
    saddle, elliptic = catalog.orbits
    assert float(torus_distance(np.array(saddle.point), np.zeros(2), standard.side)) < 1e-10
    assert float(torus_distance(np.array(elliptic.point), np.array([math.pi, 0.0]), standard.side)) < 1e-10
    assert saddle.classification == OrbitClass.SADDLE
    assert elliptic.classification == OrbitClass.ELLIPTIC


def test_standard_map_classification(standard_fixed_points):
    saddle, elliptic = standard_fixed_points.orbits
    # multiplier at (0, 0) is [[2, 1], [1, 1]]; at (pi, 0) it is [[0, 1], [-1, 1]] with trace 1
    assert saddle.positive_exponent == pytest.approx(LOG_LAMBDA, abs=1e-6)
    assert elliptic_argument(elliptic) == pytest.approx(math.pi / 3, abs=1e-6)
    assert classify(elliptic) == OrbitClass.ELLIPTIC
    assert delta(elliptic) == pytest.approx(0.0, abs=1e-12)


def test_exponents_sum_to_zero(standard_catalog):
    assert standard_catalog.orbits
    for o in standard_catalog.orbits:
        assert sum(o.exponents) == pytest.approx(0.0, abs=1e-8)
        assert orbit_lyapunov(o) == sorted(o.exponents)


def test_delta_is_invariant_under_inversion(standard_catalog):
    system = standard_catalog.system
    for o in standard_catalog.orbits:
        inverse = inverse_orbit(o, system)
        assert delta(inverse) == delta(o)
        assert inverse.exponents == tuple(-v for v in reversed(o.exponents))


def test_orbit_distance_ignores_the_starting_point(cat_catalog):
    o = next(o for o in cat_catalog.orbits if o.period == 3)
    pts = o.points_array
    assert orbit_distance(pts, np.roll(pts, 1, axis=0), 1.0) == pytest.approx(0.0, abs=1e-12)


def test_build_orbit_reports_residual():
    orbit = build_orbit(ShearMap(amplitude=0.5), (0.1, 0.1), 1)
    assert orbit.residual > 1e-3


def test_delta_phi_adds_the_orbit_average(cat_catalog):
    o = cat_catalog.orbits[0]
    assert delta_phi(o, cat_catalog.system, constant(-0.5)) == pytest.approx(LOG_LAMBDA - 0.5, abs=1e-9)


@pytest.mark.parametrize(
    "multiplier, expected",
    [
        ([[2.0, 1.0], [1.0, 1.0]], OrbitClass.SADDLE),
        ([[0.0, 1.0], [-1.0, 1.0]], OrbitClass.ELLIPTIC),
        ([[1.0, 1.0], [0.0, 1.0]], OrbitClass.PARABOLIC),
        ([[-1.0, 0.0], [0.0, -1.0]], OrbitClass.ELLIPTIC),
    ],
)
def test_classification_from_multiplier(multiplier, expected):
    assert orbit_from_multiplier(np.array(multiplier)).classification == expected
