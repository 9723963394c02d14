import math

import numpy as np
import pytest

from pressure_lab.domination.splitting import (
    candidate_splitting,
    default_horizon,
    domination_gap,
    domination_report,
    n_domination_test,
    weakness_test,
)
from pressure_lab.errors import IndeterminateVerdictError
from pressure_lab.models import DominationVerdict
from pressure_lab.orbits.spectrum import orbit_from_multiplier
from pressure_lab.systems.maps import cat_map

LOG_LAMBDA = 0.9624236501192069
GOLDEN = 0.48121182505960347
ALL_N = list(range(1, 65))


@pytest.fixture
def parabolic():
    return orbit_from_multiplier(np.array([[1.0, 1.0], [0.0, 1.0]]), orbit_id="shear")


def test_default_horizon():
    assert default_horizon(1) == 64
    assert default_horizon(40) == 160


def test_cat_fixed_point_is_one_dominated(cat_catalog):
    fixed = cat_catalog.orbits[0]
    verdict, report = n_domination_test(cat_catalog.system, fixed, 1)
    assert verdict == DominationVerdict.DOMINATED
    # ||Df^n u|| / ||Df^n v|| = lambda^{-2n}
    first = dict(report.ratios)[1]
    assert first == pytest.approx(math.exp(-2 * LOG_LAMBDA), rel=1e-9)


def test_elliptic_orbit_is_never_dominated(standard_fixed_points):
    elliptic = standard_fixed_points.orbits[1]
    report = domination_report(elliptic, ALL_N, system=standard_fixed_points.system)
    assert set(report.verdicts.values()) == {DominationVerdict.NOT_DOMINATED}
    assert "complex" in report.reason
    assert report.horizon == default_horizon(64)


def test_saddle_verdicts_are_monotone(standard_fixed_points):
    saddle = standard_fixed_points.orbits[0]
    report = domination_report(saddle, [1, 2, 4, 8], system=standard_fixed_points.system)
    verdicts = [report.verdicts[N] for N in report.tested_n]
    dominated = [v == DominationVerdict.DOMINATED for v in verdicts]
    assert dominated == sorted(dominated)
    assert dominated[-1]


def test_parabolic_orbit_is_indeterminate(parabolic):
    weak, strong, reason = candidate_splitting(parabolic)
    assert weak is None and strong is None
    assert reason.startswith("indeterminate")
    verdict, _ = n_domination_test(None, parabolic, 4)
    assert verdict == DominationVerdict.INDETERMINATE


def test_weakness_test(standard_fixed_points, parabolic):
    saddle, elliptic = standard_fixed_points.orbits
    assert weakness_test(elliptic, T=1, N=4)
    assert not weakness_test(elliptic, T=2, N=4)
    assert not weakness_test(saddle, T=1, N=1)
    with pytest.raises(IndeterminateVerdictError):
        weakness_test(parabolic, T=1, N=4)


def test_horizon_must_cover_n(standard_fixed_points):
    with pytest.raises(ValueError):
        domination_report(standard_fixed_points.orbits[0], [8], horizon=4)


def test_domination_gap_on_cat_map():
    gaps = domination_gap(cat_map(), [0.2, 0.3], 30)
    assert len(gaps) == 30
    for n, g in enumerate(gaps, start=1):
        assert g == pytest.approx(math.exp(-2 * n * LOG_LAMBDA), rel=1e-6)


def test_domination_gap_of_elliptic_point(standard_fixed_points):
    # rotation-like return map: the gap never collapses
    gaps = domination_gap(standard_fixed_points.system, [math.pi, 0.0], 12)
    assert min(gaps) > 0.1
    # the return map has order 6 up to sign, so the gap closes to 1 every third step
    assert gaps[0] == pytest.approx(math.exp(-2 * GOLDEN), abs=1e-9)
    assert gaps[2] == pytest.approx(1.0, abs=1e-9)
    assert gaps[5] == pytest.approx(1.0, abs=1e-9)
