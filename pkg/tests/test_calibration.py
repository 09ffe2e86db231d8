import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from adaptive_alpha.alpha import adaptive_alpha, anova_adaptive_alpha, log_kernel, one_way_layout_alpha
from adaptive_alpha.calibration import (
    CalibrationStrategy,
    PBICInputs,
    PBICTerm,
    StrategyKind,
    c_alpha_anchored,
    c_alpha_minimal_balanced,
    c_alpha_pbic,
    c_alpha_simple,
    calibrate,
    pbic_constant,
    pbic_single_term,
    tess_balanced_anova,
    tess_findley,
    tess_two_means,
)
from adaptive_alpha.errors import DomainError
from adaptive_alpha.linmod import harmonic_information


def test_simple_constant_is_half_chi2_exponent():
    expected = math.exp(-stats.chi2.isf(0.05, 1) / 2)
    for n, j in [(4, 2), (20, 2), (2000, 5)]:
        assert c_alpha_simple(n, j, 1).c_alpha == pytest.approx(expected, rel=1e-11)
    assert expected == pytest.approx(0.146500, abs=1e-6)


def test_minimal_balanced_constant_value():
    assert c_alpha_minimal_balanced(1).c_alpha == pytest.approx(0.212735, abs=1e-6)


@pytest.mark.parametrize("q", [1, 2, 3, 4, 7])
def test_minimal_balanced_returns_alpha0_at_minimal_layout(q):
    for alpha0 in (0.05, 0.01):
        c = c_alpha_minimal_balanced(q, alpha0).c_alpha
        assert one_way_layout_alpha([2] * (q + 1), c, alpha0) == pytest.approx(alpha0, rel=1e-12)


def test_minimal_balanced_full_formula_differs_at_two_per_group():
    # the full level at k=2, r=2 is alpha0 * sqrt(3), not alpha0
    res = anova_adaptive_alpha(2, 2, CalibrationStrategy.minimal())
    assert res.alpha_adaptive == pytest.approx(0.05 * math.sqrt(3), rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(3, 400), st.floats(0.001, 0.2))
def test_anchored_constant_hits_alpha0(q, extra, alpha0):
    j = q + 1
    n0 = j + extra
    log_b0 = math.log(n0)
    c = c_alpha_anchored(n0, j, q, log_b0, alpha0).c_alpha
    res = adaptive_alpha(log_b0, n0, j, q, c, alpha0=alpha0)
    assert res.alpha_adaptive == pytest.approx(alpha0, rel=1e-10)


def test_anchored_anova_at_anchor():
    for k, r0 in [(2, 64), (5, 40), (10, 26)]:
        res = anova_adaptive_alpha(k, r0, CalibrationStrategy.anchored(k * r0))
        assert res.alpha_adaptive == pytest.approx(0.05, rel=1e-12)


def test_pbic_limit_at_zero():
    assert pbic_constant(PBICInputs.entering([0.0], [1.0], [10.0])) == pytest.approx(math.log(2), abs=1e-12)
    assert float(pbic_single_term(0.0)) == pytest.approx(math.log(2), abs=1e-12)


def test_pbic_single_term_against_mpmath():
    for v in (1e-8, 0.3, 1.0, 7.5, 80.0):
        with mpmath.workdps(50):
            expected = -2 * mpmath.log((1 - mpmath.exp(-v)) / (mpmath.sqrt(2) * v))
        assert float(pbic_single_term(v)) == pytest.approx(float(expected), rel=1e-12)
    assert float(pbic_single_term(1.0)) == pytest.approx(1.610497, abs=1e-6)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1e3), st.floats(1e-6, 1e3))
def test_pbic_term_increasing_in_v(v, dv):
    assert float(pbic_single_term(v + dv)) >= float(pbic_single_term(v)) - 1e-12


def test_pbic_scalar_and_vector_agree():
    vs = np.array([0.0, 0.01, 1.0, 20.0])
    # d = 1 and n_eff = 1 give v = xi / 2
    for v, expected in zip(vs, pbic_single_term(vs)):
        inputs = PBICInputs.entering([2 * v], [1.0], [1.0])
        assert pbic_constant(inputs) == pytest.approx(expected, rel=1e-12)


def test_pbic_null_terms_enter_with_opposite_sign():
    term = PBICTerm(2.0, 1.0, 3.0)
    both = PBICInputs(terms_i=(term,), terms_j=(term,))
    assert pbic_constant(both) == pytest.approx(0.0, abs=1e-14)


def test_c_alpha_pbic_example():
    # exp(-(chi2_.05(1) + log 2) / 2) at j = 1
    c = c_alpha_pbic(10**6, 1, 1, 0.05, math.log(2)).c_alpha
    assert c == pytest.approx(0.103591, abs=1e-6)


def test_tess_two_means_example():
    t = tess_two_means(10, 100, 14.0, 140.0)
    assert t.n_eff == pytest.approx(200.0)
    assert t.d == pytest.approx(2.8)


def test_tess_findley_and_anova():
    t = tess_findley(10)
    assert t.n_eff == pytest.approx(harmonic_information(10))
    assert t.d == pytest.approx(1 / harmonic_information(10))
    assert tess_balanced_anova(3, 12).n_eff == 12.0
    assert tess_balanced_anova(3, 12).d is None


def test_strategy_validation():
    with pytest.raises(DomainError):
        CalibrationStrategy(StrategyKind.ANCHORED)
    with pytest.raises(DomainError):
        CalibrationStrategy(StrategyKind.PBIC)
    with pytest.raises(DomainError):
        CalibrationStrategy.simple(alpha0=1.5)
    with pytest.raises(ValueError):
        CalibrationStrategy("bayes")
    with pytest.raises(DomainError):
        PBICTerm(-1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        PBICTerm(1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        PBICInputs.entering([1.0], [1.0, 2.0], [1.0])


def test_anchored_general_design_needs_log_b():
    with pytest.raises(DomainError):
        calibrate(CalibrationStrategy.anchored(100), 50, 2, 1)


def test_describe_carries_provenance():
    d = CalibrationStrategy.anchored(128, 0.05).describe()
    assert d == {"kind": "anchored", "alpha0": 0.05, "anchor_n": 128}
    p = CalibrationStrategy.pbic_strategy(PBICInputs.entering([1.0], [2.0], [3.0])).describe()
    assert p["kind"] == "pbic" and p["pbic_terms_j"] == [{"xi_hat": 1.0, "d": 2.0, "n_eff": 3.0}]


def test_log_kernel_rejects_nonpositive_bracket():
    with pytest.raises(DomainError):
        log_kernel(-50.0, 20, 2, 1)
