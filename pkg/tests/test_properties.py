"""Structural properties every estimate must respect, checked on small catalogs."""
import numpy as np
import pytest

from pressure_lab.models import Budgets, SftModel
from pressure_lab.orbits.search import find_periodic_orbits
from pressure_lab.orbits.spectrum import delta, inverse_orbit
from pressure_lab.pressure.bowen import bowen_pressure
from pressure_lab.pressure.grassmann import grassmann_pressure, sigma_k
from pressure_lab.pressure.periodic import periodic_pressure
from pressure_lab.pressure.sft import sft_pressure
from pressure_lab.systems.potentials import SumPotential, constant, cosine, scaled, shifted, zero
from pressure_lab.transition.equilibria import potential_range

SMALL_BUDGETS = Budgets(n_list=[1, 2, 4], angles=64, basepoints=8, refine_steps=10)
FIXED_SAMPLE = Budgets(n_list=[1, 2, 4], angles=64, basepoints=8, refine_steps=0)
SHIFTS = [-1.5, 0.25, 2.0]
SUBADDITIVE_SLACK = 1e-3
BOWEN_TOLERANCE = 0.05
GOLDEN_MEAN = [[1, 1], [1, 0]]


@pytest.fixture(scope="module")
def standard_catalog(standard):
    return find_periodic_orbits(standard, max_period=2, grid_density=32, seed=5)


@pytest.fixture(scope="module")
def cat_sigma_series(cat):
    estimate = sigma_k(cat, zero(), 1, [1, 2, 3, 4, 6, 8], seed=0, sample_budget=64, basepoints=4, refine_steps=10)
    return {int(n): s for n, s in estimate.series}


@pytest.mark.parametrize("c", SHIFTS)
def test_periodic_pressure_shifts_with_constants(cat_catalog, cat, c):
    phi = cosine(0.3, [1, 0])
    base = periodic_pressure(cat_catalog, cat, phi).value
    assert periodic_pressure(cat_catalog, cat, shifted(phi, c)).value == pytest.approx(base + c, abs=1e-12)


@pytest.mark.parametrize("c", SHIFTS)
def test_grassmann_pressure_shifts_with_constants(cat, c):
    phi = cosine(0.2, [0, 1])
    base = grassmann_pressure(cat, phi, SMALL_BUDGETS, seed=0).value
    assert grassmann_pressure(cat, shifted(phi, c), SMALL_BUDGETS, seed=0).value == pytest.approx(base + c, abs=1e-6)


def test_periodic_pressure_is_lipschitz_in_the_potential(standard_catalog, standard):
    phi = cosine(0.3, [1, 0])
    psi = cosine(0.5, [1, 1])
    sup, inf = potential_range(SumPotential(terms=[phi, scaled(psi, -1.0)]), standard)
    distance = max(abs(sup), abs(inf))
    gap = abs(periodic_pressure(standard_catalog, standard, phi).value - periodic_pressure(standard_catalog, standard, psi).value)
    assert gap <= distance + 1e-9


def test_periodic_pressure_is_monotone_in_the_potential(standard_catalog, standard):
    phi = cosine(0.3, [1, 0])
    lower = periodic_pressure(standard_catalog, standard, phi).value
    upper = periodic_pressure(standard_catalog, standard, shifted(phi, 0.1)).value
    assert lower <= upper


def test_sigma_sequence_is_subadditive(cat_sigma_series):
    # a_n = n s_n satisfies a_{m+n} <= a_m + a_n
    a = {n: n * s for n, s in cat_sigma_series.items()}
    for m, n in [(1, 1), (1, 2), (1, 3), (2, 2), (2, 4), (3, 3), (2, 6), (4, 4)]:
        assert a[m + n] <= a[m] + a[n] + SUBADDITIVE_SLACK


def test_sigma_sup_is_non_increasing_in_n(cat_sigma_series):
    values = [cat_sigma_series[n] for n in sorted(cat_sigma_series)]
    for earlier, later in zip(values, values[1:]):
        assert later <= earlier + SUBADDITIVE_SLACK


def test_grassmann_pressure_is_lipschitz_on_a_fixed_sample(cat):
    # no refinement: both potentials are scored on the same candidates
    phi = cosine(0.3, [1, 0])
    psi = SumPotential(terms=[phi, cosine(0.05, [0, 1]), constant(-0.02)])
    gap = abs(grassmann_pressure(cat, phi, FIXED_SAMPLE, seed=0).value - grassmann_pressure(cat, psi, FIXED_SAMPLE, seed=0).value)
    assert gap <= 0.07 + 1e-12


def test_grassmann_pressure_is_monotone_on_a_fixed_sample(cat):
    phi = cosine(0.3, [1, 0])
    above = SumPotential(terms=[phi, cosine(0.05, [0, 1]), constant(0.05)])
    lower = grassmann_pressure(cat, phi, FIXED_SAMPLE, seed=0).value
    assert lower <= grassmann_pressure(cat, above, FIXED_SAMPLE, seed=0).value + 1e-12


def test_bowen_pressure_is_lipschitz_in_the_potential(cat):
    psi = cosine(0.02, [1, 0])
    base = bowen_pressure(cat, zero(), (3, 5), 0.1, seed=2)
    perturbed = bowen_pressure(cat, psi, (3, 5), 0.1, seed=2)
    assert abs(perturbed.value - base.value) <= 0.02 + BOWEN_TOLERANCE


def test_bowen_pressure_is_monotone_in_the_potential(cat):
    # 0.05 (1 + cos) >= 0 everywhere
    above = shifted(cosine(0.05, [0, 1]), 0.05)
    lower = bowen_pressure(cat, zero(), (3, 5), 0.1, seed=2).value
    upper = bowen_pressure(cat, above, (3, 5), 0.1, seed=2).value
    assert lower <= upper + BOWEN_TOLERANCE


@pytest.mark.parametrize(
    "phi, psi",
    [([0.1, -0.3], [0.25, -0.2]), ([0.0, 0.0], [-0.4, 0.1]), ([[0.2, -0.1], [0.3, 0.0]], [[0.1, 0.0], [0.5, 0.0]])],
    ids=["symbols", "from-zero", "table"],
)
def test_sft_pressure_is_lipschitz_in_the_potential(phi, psi):
    distance = float(np.max(np.abs(np.array(phi) - np.array(psi))))
    p_phi = sft_pressure(SftModel(transitions=GOLDEN_MEAN, potential=phi)).value
    p_psi = sft_pressure(SftModel(transitions=GOLDEN_MEAN, potential=psi)).value
    assert abs(p_phi - p_psi) <= distance + 1e-12


def test_sft_pressure_is_monotone_in_the_potential():
    lower = sft_pressure(SftModel(transitions=GOLDEN_MEAN, potential=[0.1, -0.3])).value
    upper = sft_pressure(SftModel(transitions=GOLDEN_MEAN, potential=[0.1, 0.0])).value
    assert lower < upper


def test_exponents_of_conservative_orbits_sum_to_zero(standard_catalog):
    assert standard_catalog.orbits
    for orbit in standard_catalog.orbits:
        assert sum(orbit.exponents) == pytest.approx(0.0, abs=1e-8)


def test_delta_is_invariant_under_inversion(standard_catalog, standard):
    for orbit in standard_catalog.orbits:
        inverse = inverse_orbit(orbit, standard)
        assert delta(inverse) == delta(orbit)
        assert np.allclose(sorted(inverse.exponents), sorted(-v for v in orbit.exponents))


def test_delta_is_non_negative(standard_catalog):
    assert min(delta(o) for o in standard_catalog.orbits) >= 0.0
