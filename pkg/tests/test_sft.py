import math

import numpy as np
import pytest
from pydantic import ValidationError

from pressure_lab.models import SftModel
from pressure_lab.pressure.sft import (
    is_irreducible,
    sft_entropy,
    sft_perron_data,
    sft_pressure,
    sft_trace_pressure,
)

GOLDEN = 0.48121182505960347
GOLDEN_MEAN = [[1, 1], [1, 0]]
FULL_SHIFT = [[1, 1], [1, 1]]


def test_golden_mean_entropy():
    assert sft_entropy(SftModel(transitions=GOLDEN_MEAN)) == pytest.approx(GOLDEN, abs=1e-10)


def test_full_shift_entropy():
    assert sft_entropy(SftModel(transitions=FULL_SHIFT)) == pytest.approx(math.log(2.0), abs=1e-12)


def test_full_shift_pressure_oracle():
    # P = log(e^a0 + e^a1) for phi depending on x_0 only
    rng = np.random.default_rng(2024)
    for a0, a1 in rng.uniform(-2.0, 2.0, size=(20, 2)):
        estimate = sft_pressure(SftModel(transitions=FULL_SHIFT, potential=[float(a0), float(a1)]))
        assert estimate.value == pytest.approx(math.log(math.exp(a0) + math.exp(a1)), abs=1e-10)
        assert estimate.bound_kind == "two-sided"


def test_two_symbol_table_potential():
    # phi(i, j) = c on every allowed transition shifts the entropy by c
    table = [[0.3, 0.3], [0.3, 0.3]]
    estimate = sft_pressure(SftModel(transitions=GOLDEN_MEAN, potential=table))
    assert estimate.value == pytest.approx(GOLDEN + 0.3, abs=1e-12)


def test_trace_pressure_converges():
    model = SftModel(transitions=GOLDEN_MEAN)
    # tr(M^n) is the n-th Lucas number phi^n + (-1/phi)^n
    assert sft_trace_pressure(model, 1) == pytest.approx(0.0, abs=1e-12)
    assert sft_trace_pressure(model, 2) == pytest.approx(math.log(3.0) / 2, abs=1e-12)
    assert sft_trace_pressure(model, 40) == pytest.approx(GOLDEN, abs=1e-10)


def test_trace_pressure_needs_periodic_words():
    cyclic = SftModel(transitions=[[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        sft_trace_pressure(cyclic, 3)
    with pytest.raises(ValueError):
        sft_trace_pressure(cyclic, 0)


def test_perron_data():
    root, left, right = sft_perron_data(SftModel(transitions=GOLDEN_MEAN))
    assert root == pytest.approx(math.exp(GOLDEN))
    assert np.all(left > 0) and np.all(right > 0)
    assert right.sum() == pytest.approx(1.0)
    assert float(left @ right) == pytest.approx(1.0)


def test_reducible_matrix_warns():
    model = SftModel(transitions=[[1, 1], [0, 1]])
    assert not is_irreducible(model)
    estimate = sft_pressure(model)
    assert estimate.value == pytest.approx(0.0, abs=1e-12)
    assert estimate.warnings


def test_irreducible_matrix():
    assert is_irreducible(SftModel(transitions=GOLDEN_MEAN))


@pytest.mark.parametrize(
    "transitions, potential",
    [
        ([[1, 0], [1, 0]], None),
        ([[1, 2], [1, 1]], None),
        ([[1, 1, 0], [1, 1, 1]], None),
        (GOLDEN_MEAN, [0.1, 0.2, 0.3]),
    ],
)
def test_invalid_models(transitions, potential):
    with pytest.raises(ValidationError):
        SftModel(transitions=transitions, potential=potential)
