import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sc
from scipy import stats

from adaptive_alpha.alpha import (
    adaptive_alpha,
    alpha_for_design,
    anova_adaptive_alpha,
    bic_adaptive_alpha,
    pbic_alpha_values,
)
from adaptive_alpha.calibration import CalibrationStrategy, PBICInputs, pbic_single_term
from adaptive_alpha.distcore import null_law
from adaptive_alpha.errors import DomainError


def oracle_alpha(b, n, j, q, c_alpha, C=0.0, alpha0=0.05):
    """Direct (non-log) evaluation with scipy's quantile and Gamma function."""
    rate = (n - j) / (2 * (n - 1))
    g = stats.chi2.isf(alpha0, q) * (n - 1) / (n - j)
    bracket = g + math.log(b) + C
    return bracket ** (q / 2 - 1) / (b ** rate * (1 / rate) ** (q / 2 - 1) * sc.gamma(q / 2)) * c_alpha


@st.composite
def alpha_cases(draw):
    j = draw(st.integers(1, 8))
    q = draw(st.integers(1, j))
    n = draw(st.integers(j + 2, 3000))
    b = draw(st.floats(1.0, 1e8))
    c = draw(st.floats(1e-3, 1.0))
    return b, n, j, q, c


@settings(max_examples=150, deadline=None)
@given(alpha_cases())
def test_matches_direct_oracle(case):
    b, n, j, q, c = case
    res = adaptive_alpha(math.log(b), n, j, q, c)
    assert res.alpha_adaptive == pytest.approx(oracle_alpha(b, n, j, q, c), rel=1e-9)


def test_q1_simple_closed_form():
    # q=1, simple calibration: exp(-rate * bracket) / sqrt(pi * rate * bracket)
    n, j, b = 200, 2, 50.0
    law = null_law(n, j, 1)
    g = law.isf(0.05)
    bracket = g + math.log(b)
    expected = math.exp(-law.rate * bracket) / math.sqrt(math.pi * law.rate * bracket)
    res = alpha_for_design(math.log(b), n, j, 1, CalibrationStrategy.simple())
    assert res.alpha_adaptive == pytest.approx(expected, rel=1e-12)


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 2000), st.floats(0.0, 15.0))
def test_q2_simple_equals_tail_at_adaptive_quantile(n, log_b):
    # exponential case: the level is exactly the null tail beyond g + log b
    res = alpha_for_design(log_b, n, 2, 2, CalibrationStrategy.simple())
    assert res.alpha_adaptive == pytest.approx(float(null_law(n, 2, 2).sf(res.adaptive_quantile)), rel=1e-10)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 2), st.integers(20, 5000), st.floats(0.0, 12.0), st.floats(0.01, 5.0))
def test_decreasing_in_b_for_q_at_most_2(q, n, log_b, step):
    j = q + 1
    s = CalibrationStrategy.simple()
    a1 = alpha_for_design(log_b, n, j, q, s).alpha_adaptive
    a2 = alpha_for_design(log_b + step, n, j, q, s).alpha_adaptive
    assert a2 < a1


def test_simple_level_equals_alpha0_near_b_one_for_large_n():
    # b = 1 and q = 2 with rate -> 1/2: the level returns the fixed alpha0
    res = alpha_for_design(0.0, 10**7, 2, 2, CalibrationStrategy.simple())
    assert res.alpha_adaptive == pytest.approx(0.05, rel=1e-6)


@pytest.mark.parametrize("r,expected", [(10, 0.0236), (50, 0.0090), (100, 0.0060), (500, 0.0024), (1000, 0.0017)])
def test_anova_simple_values(r, expected):
    assert anova_adaptive_alpha(2, r, CalibrationStrategy.simple()).alpha_adaptive == pytest.approx(expected, abs=1e-4)


def test_result_fields_and_display_clamp():
    res = alpha_for_design(math.log(1e-3), 3, 2, 1, CalibrationStrategy.simple())
    assert res.alpha_adaptive > 1
    assert res.alpha_display == 1.0
    d = res.to_dict()
    assert set(d) == {"alpha_adaptive", "g", "adaptive_quantile", "log_b", "c_prior", "c_alpha",
                      "strategy", "alpha0", "n", "j", "q"}
    assert res.b == pytest.approx(1e-3)


def test_adaptive_quantile_shift():
    res = alpha_for_design(math.log(40.0), 100, 3, 2, CalibrationStrategy.simple())
    assert res.adaptive_quantile == pytest.approx(res.g + math.log(40.0))


def test_pbic_vector_matches_scalar():
    v = np.array([0.0, 0.05, 0.7, 3.0])
    C = pbic_single_term(v)
    vec = pbic_alpha_values(math.log(25.0), 100, 2, 1, C)
    for xi, expected in zip(v * 2.0, vec):
        inputs = PBICInputs.entering([xi], [1.0], [1.0])
        res = alpha_for_design(math.log(25.0), 100, 2, 1, CalibrationStrategy.pbic_strategy(inputs))
        assert res.alpha_adaptive == pytest.approx(expected, rel=1e-12)


def test_bic_simple_against_oracle():
    chi2 = stats.chi2.isf(0.05, 1)
    for n in (10, 100, 10000):
        expected = (chi2 + math.log(n)) ** -0.5 / (2 ** -0.5 * math.sqrt(n) * math.sqrt(math.pi)) * math.exp(-chi2 / 2)
        assert bic_adaptive_alpha(n, 1).alpha_adaptive == pytest.approx(expected, rel=1e-11)


def test_bic_q2_and_anchor():
    chi2 = stats.chi2.isf(0.05, 2)
    assert bic_adaptive_alpha(50, 2).alpha_adaptive == pytest.approx(math.exp(-chi2 / 2) / 50, rel=1e-11)
    assert bic_adaptive_alpha(64, 1, anchor_n=64).alpha_adaptive == pytest.approx(0.05, rel=1e-12)


def test_domain_errors():
    with pytest.raises(DomainError):
        adaptive_alpha(1.0, 20, 2, 1, c_alpha=0.0)
    with pytest.raises(DomainError):
        anova_adaptive_alpha(1, 10, CalibrationStrategy.simple())
    with pytest.raises(DomainError):
        anova_adaptive_alpha(3, 10, CalibrationStrategy.anchored(100))
    with pytest.raises(DomainError):
        bic_adaptive_alpha(1, 1)
    with pytest.raises(DomainError):
        pbic_alpha_values(-40.0, 20, 2, 1, [0.0])
