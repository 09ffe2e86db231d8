"""Consistency of the printed mpg summary statistics without the raw data.

The raw dataset is not vendored, so these checks run from the printed
variances and correlations only (n = 82).
"""

import math

import pytest

from adaptive_alpha.alpha import alpha_for_design
from adaptive_alpha.calibration import CalibrationStrategy

N = 82
# predictor: (Var, Cor(wt, .), b, p-value, alpha_simple) as printed
PRINTED = {
    "sp": (197.1, 0.68, 8612.9, 0.0325, 0.0004),
    "hp": (3230.9, 0.83, 80449.5, 0.1661, 0.0001),
    "vol": (491.3, 0.38, 33901.1, 0.6482, 0.0002),
}


@pytest.mark.parametrize("name", sorted(PRINTED))
def test_b_from_variance_and_correlation(name):
    var, cor, b, *_ = PRINTED[name]
    # Var and Cor are printed to 4 and 2 significant digits
    assert (N - 1) * var * (1 - cor**2) == pytest.approx(b, rel=0.015)


@pytest.mark.parametrize("name", sorted(PRINTED))
def test_simple_level_from_printed_b(name):
    _, _, b, _, alpha_simple = PRINTED[name]
    level = alpha_for_design(math.log(b), N, 3, 1, CalibrationStrategy.simple()).alpha_adaptive
    assert round(level, 4) == alpha_simple


def test_first_test_flips():
    _, _, b, p, _ = PRINTED["sp"]
    level = alpha_for_design(math.log(b), N, 3, 1, CalibrationStrategy.simple()).alpha_adaptive
    assert level < p < 0.05
    assert all(v[3] > 0.05 for k, v in PRINTED.items() if k != "sp")
