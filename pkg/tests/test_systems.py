import math

import numpy as np
import pytest
from pydantic import ValidationError

from pressure_lab.errors import OverflowGuardError
from pressure_lab.systems.dynamics import (
    birkhoff_sum,
    birkhoff_sums,
    bowen_distance,
    cocycle,
    eval_inverse,
    eval_map,
    inverse_roundtrip_error,
    iterate,
    jacobian,
    jacobian_determinants,
    log_cocycle_norms,
    lyapunov_spectrum,
    torus_distance,
)
from pressure_lab.systems.linalg import eigenvalues, singular_values_2x2, spectral_norm
from pressure_lab.systems.maps import ComposedMap, LinearTorusMap, ShearMap, StandardMap, cat_map, identity_map, wrap
from pressure_lab.systems.potentials import GeometricPotential, constant, cosine, scaled, shifted

LOG_LAMBDA = 0.9624236501192069  # log((3 + sqrt 5) / 2)
GOLDEN = 0.48121182505960347  # log((1 + sqrt 5) / 2)

POINTS = np.array([[0.1, 0.2], [0.35, 0.9], [0.77, 0.01], [0.5, 0.5]])


@pytest.fixture
def perturbed_cat():
    return ComposedMap(maps=[cat_map(), ShearMap(amplitude=0.3)])


def test_cat_map_step():
    # (0.1, 0.2) -> (0.4, 0.3)
    assert eval_map(cat_map(), np.array([0.1, 0.2])) == pytest.approx(np.array([0.4, 0.3]), abs=1e-12)
    assert eval_inverse(cat_map(), np.array([0.4, 0.3])) == pytest.approx(np.array([0.1, 0.2]), abs=1e-12)


def test_wrap_lands_in_fundamental_domain():
    wrapped = wrap(np.array([[-0.25, 1.0], [2.5, -1e-17]]), 1.0)
    assert wrapped == pytest.approx(np.array([[0.75, 0.0], [0.5, 0.0]]))
    assert np.all((wrapped >= 0.0) & (wrapped < 1.0))


def test_non_unimodular_matrix_rejected():
    with pytest.raises(ValidationError):
        LinearTorusMap(matrix=[[2, 0], [0, 1]])


def test_composed_maps_need_a_common_domain():
    with pytest.raises(ValidationError):
        ComposedMap(maps=[cat_map(), StandardMap(K=1.0)])


@pytest.mark.parametrize(
    "system",
    [cat_map(), StandardMap(K=1.0), ShearMap(amplitude=0.7), ComposedMap(maps=[cat_map(), ShearMap(amplitude=0.3)])],
    ids=["cat", "standard", "shear", "composed"],
)
def test_maps_are_conservative_and_invertible(system):
    points = POINTS * system.side
    assert jacobian_determinants(system, points) == pytest.approx(np.ones(len(points)), abs=1e-12)
    there_back, back_there = inverse_roundtrip_error(system, points)
    assert there_back < 1e-10
    assert back_there < 1e-10


def test_composed_jacobian_is_chain_rule(perturbed_cat):
    x = np.array([0.3, 0.6])
    expected = jacobian(ShearMap(amplitude=0.3), eval_map(cat_map(), x)) @ jacobian(cat_map(), x)
    assert jacobian(perturbed_cat, x) == pytest.approx(expected, abs=1e-12)


def test_standard_map_jacobian_matches_finite_differences():
    system = StandardMap(K=1.3)
    x = np.array([[1.1, 2.2]])
    h = 1e-6
    numeric = np.empty((2, 2))
    for j in range(2):
        step = np.zeros((1, 2))
        step[0, j] = h
        numeric[:, j] = (system.lift(x + step) - system.lift(x - step))[0] / (2 * h)
    assert system.jacobian_at(x)[0] == pytest.approx(numeric, abs=1e-6)


def test_cocycle_identity(perturbed_cat):
    # D f^{m+n}(x) = D f^m(f^n x) D f^n(x), also across negative times
    x = np.array([0.21, 0.64])
    for m, n in [(2, 3), (4, 1), (-2, 3), (3, -1)]:
        fn_x = x
        step = eval_map if n >= 0 else eval_inverse
        for _ in range(abs(n)):
            fn_x = step(perturbed_cat, fn_x)
        lhs = cocycle(perturbed_cat, x, m + n)
        rhs = cocycle(perturbed_cat, fn_x, m) @ cocycle(perturbed_cat, x, n)
        assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-8)


def test_cocycle_zero_is_identity():
    assert cocycle(StandardMap(K=2.0), np.array([1.0, 1.0]), 0) == pytest.approx(np.eye(2))


def test_cocycle_overflow_guard():
    # the largest entry of A^n passes 1e300 at n = 719, well before inf
    with pytest.raises(OverflowGuardError) as excinfo:
        cocycle(cat_map(), np.array([0.1, 0.1]), 1000)
    assert math.isfinite(excinfo.value.norm)
    assert excinfo.value.norm > 1e300
    assert 700 < excinfo.value.step < 730


@pytest.mark.parametrize("m", [200, 400, 2000])
def test_geometric_potential_of_large_order_stays_finite(m):
    values = GeometricPotential(m=m).evaluate(cat_map(), np.array([[0.3, 0.4]]))
    assert values == pytest.approx(np.array([-LOG_LAMBDA]), abs=1e-9)


def test_log_cocycle_norms_match_direct_products(perturbed_cat):
    direct = np.log(spectral_norm(np.stack([cocycle(perturbed_cat, p, 12) for p in POINTS])))
    assert log_cocycle_norms(perturbed_cat, POINTS, 12) == pytest.approx(direct, rel=1e-10)
    assert log_cocycle_norms(perturbed_cat, POINTS, 0) == pytest.approx(np.zeros(len(POINTS)), abs=1e-15)


def test_singular_values_of_huge_matrices():
    a = np.array([[2.0, 1.0], [1.0, 1.0]]) * 1e200
    s1, s2 = singular_values_2x2(a)
    assert float(s1) == pytest.approx(math.exp(LOG_LAMBDA) * 1e200, rel=1e-12)
    assert float(s2) == pytest.approx(math.exp(-LOG_LAMBDA) * 1e200, rel=1e-12)
    zero_s1, zero_s2 = singular_values_2x2(np.zeros((2, 2)))
    assert float(zero_s1) == 0.0 and float(zero_s2) == 0.0


def test_cocycle_horizon():
    with pytest.raises(ValueError):
        cocycle(cat_map(), np.array([0.1, 0.1]), 20_000)


def test_lyapunov_spectrum_of_cat_map():
    # finite-time exponents carry an O(1/n) transient from the initial frame
    spectrum = lyapunov_spectrum(cat_map(), np.array([0.3, 0.4]), 500)
    assert spectrum == pytest.approx(np.array([-LOG_LAMBDA, LOG_LAMBDA]), abs=1e-3)
    assert spectrum.sum() == pytest.approx(0.0, abs=1e-10)


def test_lyapunov_spectrum_sums_to_zero():
    spectrum = lyapunov_spectrum(StandardMap(K=4.0), np.array([1.0, 2.0]), 200)
    assert spectrum.sum() == pytest.approx(0.0, abs=1e-8)


def test_torus_distance_wraps():
    assert float(torus_distance(np.array([0.05, 0.5]), np.array([0.95, 0.5]), 1.0)) == pytest.approx(0.1)
    assert float(torus_distance(np.array([0.1, 0.1]), np.array([0.1, 0.1]), 1.0)) == 0.0


def test_bowen_distance_grows_along_unstable_direction():
    x = np.array([0.2, 0.2])
    y = x + 1e-6 * np.array([1.0, (math.sqrt(5) - 1) / 2])
    # the separation grows by lambda per step while it stays small
    assert bowen_distance(cat_map(), x, y, 1) == pytest.approx(float(torus_distance(x, y, 1.0)))
    ratio = bowen_distance(cat_map(), x, y, 6) / bowen_distance(cat_map(), x, y, 5)
    assert ratio == pytest.approx(math.exp(LOG_LAMBDA), rel=1e-6)


def test_birkhoff_sum_of_constant():
    assert birkhoff_sum(StandardMap(K=1.0), constant(0.25), np.array([1.0, 1.0]), 8) == pytest.approx(2.0)


@pytest.mark.parametrize("m, n", [(1, 1), (3, 5), (7, 2)])
def test_birkhoff_sums_are_additive_along_orbits(perturbed_cat, m, n):
    # S_{m+n} phi(x) = S_m phi(x) + S_n phi(f^m x)
    phi = shifted(cosine(0.4, [1, 2]), 0.1)
    lhs = birkhoff_sums(perturbed_cat, phi, POINTS, m + n)
    rhs = birkhoff_sums(perturbed_cat, phi, POINTS, m) + birkhoff_sums(perturbed_cat, phi, iterate(perturbed_cat, POINTS, m), n)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_bowen_distance_is_a_metric_non_decreasing_in_n():
    system = StandardMap(K=1.0)
    rng = np.random.default_rng(3)
    x, y, z = rng.uniform(0.0, system.side, size=(3, 2))
    for n in (1, 2, 5, 9):
        d_xy = bowen_distance(system, x, y, n)
        assert bowen_distance(system, x, x, n) == 0.0
        assert d_xy == pytest.approx(bowen_distance(system, y, x, n), abs=1e-14)
        assert d_xy <= bowen_distance(system, x, z, n) + bowen_distance(system, z, y, n) + 1e-12
        assert bowen_distance(system, x, y, n + 1) >= d_xy


@pytest.mark.parametrize(
    "system",
    [cat_map(), StandardMap(K=1.0), ComposedMap(maps=[cat_map(), ShearMap(amplitude=0.3)])],
    ids=["cat", "standard", "composed"],
)
def test_jacobian_determinant_is_one_on_a_dense_sample(system):
    # additive recurrence with irrational steps: 10^4 well spread points
    steps = np.array([(math.sqrt(5) - 1) / 2, math.sqrt(2) - 1])
    points = np.mod(np.outer(np.arange(1, 10_001), steps), 1.0) * system.side
    assert np.max(np.abs(jacobian_determinants(system, points) - 1.0)) < 1e-12


def test_potential_algebra():
    phi = cosine(0.5, [1, 0])
    x = np.array([[0.25, 0.0], [0.0, 0.3]])
    assert phi.evaluate(identity_map(2), x) == pytest.approx(np.array([0.0, 0.5]), abs=1e-12)
    assert shifted(phi, 1.0).evaluate(identity_map(2), x) == pytest.approx(np.array([1.0, 1.5]), abs=1e-12)
    assert scaled(phi, -2.0).evaluate(identity_map(2), x) == pytest.approx(np.array([0.0, -1.0]), abs=1e-12)


def test_geometric_potential_on_cat_map():
    # A is symmetric, so ||A^m|| = lambda^m everywhere
    values = GeometricPotential(m=3).evaluate(cat_map(), POINTS)
    assert values == pytest.approx(np.full(len(POINTS), -LOG_LAMBDA), abs=1e-12)


def test_geometric_potential_order_must_be_positive():
    with pytest.raises(ValidationError):
        GeometricPotential(m=0)


def test_closed_form_singular_values():
    m = np.array([[0.0, 1.0], [-1.0, 1.0]])
    s1, s2 = singular_values_2x2(m)
    assert float(s1) == pytest.approx(math.exp(GOLDEN))
    assert float(s2) == pytest.approx(math.exp(-GOLDEN))
    assert float(spectral_norm(m)) == pytest.approx(math.exp(GOLDEN))


def test_closed_form_eigenvalues():
    eigs = eigenvalues(np.array([[0.0, 1.0], [-1.0, 1.0]]))
    assert np.abs(eigs) == pytest.approx(np.ones(2), abs=1e-15)
    assert np.max(np.abs(np.angle(eigs))) == pytest.approx(math.pi / 3)
    assert eigenvalues(np.array([[2.0, 1.0], [1.0, 1.0]])).real == pytest.approx(
        np.array([math.exp(LOG_LAMBDA), math.exp(-LOG_LAMBDA)])
    )
