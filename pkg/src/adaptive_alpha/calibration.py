"""Calibration constants for the adaptive significance level.

Four strategies fix the multiplicative constant ``C_alpha``:

simple
    ``C_alpha = exp(-rate * g)``; independent of n because ``rate * g`` is
    half the chi-square quantile.
minimal
    the level equals ``alpha0`` for the minimal balanced one-way layout
    (two observations per group).
anchored
    the level equals ``alpha0`` at a chosen design (a sample size fixed by a
    power calculation, say).
pbic
    adds the prior-based constant ``C`` computed from effect estimates,
    unit-information scales ``d`` and effective sample sizes.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .distcore import null_law
from .errors import DegenerateDataError, DomainError


class StrategyKind(str, enum.Enum):
    SIMPLE = "simple"
    MINIMAL = "minimal"
    ANCHORED = "anchored"
    PBIC = "pbic"


@dataclass(frozen=True)
class PBICTerm:
    xi_hat: float
    d: float
    n_eff: float

    def __post_init__(self):
        if not (self.d > 0 and self.n_eff > 0):
            raise DomainError(f"PBIC term needs d > 0 and n_eff > 0, got d={self.d}, n_eff={self.n_eff}")
        if not (math.isfinite(self.xi_hat) and self.xi_hat >= 0):
            raise DomainError(f"PBIC term needs xi_hat >= 0, got {self.xi_hat!r}")

    @property
    def v(self):
        return self.xi_hat / (self.d * (1.0 + self.n_eff))


@dataclass(frozen=True)
class PBICInputs:
    terms_i: tuple = ()
    terms_j: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "terms_i", tuple(self.terms_i))
        object.__setattr__(self, "terms_j", tuple(self.terms_j))

    @classmethod
    def entering(cls, xi_hat, d, n_eff):
        """Inputs with one term per entering parameter and none for the null model."""
        if not (len(xi_hat) == len(d) == len(n_eff)):
            raise DomainError("xi_hat, d and n_eff must have equal lengths")
        return cls(terms_j=tuple(PBICTerm(x, dd, ne) for x, dd, ne in zip(xi_hat, d, n_eff)))


@dataclass(frozen=True)
class CalibrationStrategy:
    kind: StrategyKind = StrategyKind.SIMPLE
    alpha0: float = 0.05
    anchor_n: int | None = None
    anchor_log_b: float | None = None
    pbic: PBICInputs | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "kind", StrategyKind(self.kind))
        if not (0 < self.alpha0 < 1):
            raise DomainError(f"alpha0 must lie in (0, 1), got {self.alpha0!r}")
        if self.kind is StrategyKind.ANCHORED and self.anchor_n is None:
            raise DomainError("anchored calibration needs anchor_n")
        if self.kind is StrategyKind.PBIC and self.pbic is None:
            raise DomainError("PBIC calibration needs explicit PBIC inputs (xi_hat, d, n_eff)")

    @classmethod
    def simple(cls, alpha0=0.05):
        return cls(StrategyKind.SIMPLE, alpha0)

    @classmethod
    def minimal(cls, alpha0=0.05):
        return cls(StrategyKind.MINIMAL, alpha0)

    @classmethod
    def anchored(cls, anchor_n, alpha0=0.05, anchor_log_b=None):
        return cls(StrategyKind.ANCHORED, alpha0, anchor_n=anchor_n, anchor_log_b=anchor_log_b)

    @classmethod
    def pbic_strategy(cls, inputs, alpha0=0.05):
        return cls(StrategyKind.PBIC, alpha0, pbic=inputs)

    def describe(self):
        out = {"kind": self.kind.value, "alpha0": self.alpha0}
        if self.kind is StrategyKind.ANCHORED:
            out["anchor_n"] = self.anchor_n
            if self.anchor_log_b is not None:
                out["anchor_log_b"] = self.anchor_log_b
        if self.kind is StrategyKind.PBIC:
            out["pbic_terms_i"] = [vars(t) for t in self.pbic.terms_i]
            out["pbic_terms_j"] = [vars(t) for t in self.pbic.terms_j]
        return out


@dataclass(frozen=True)
class CalibrationConstant:
    c_alpha: float
    c_prior: float
    provenance: str

    def __post_init__(self):
        if not (self.c_alpha > 0 and math.isfinite(self.c_alpha)):
            raise DegenerateDataError(f"calibration constant must be positive, got {self.c_alpha!r}")


def c_alpha_simple(n, j, q, alpha0=0.05):
    law = null_law(n, j, q)
    g = law.isf(alpha0)
    return CalibrationConstant(math.exp(-law.rate * g), 0.0, "simple")


def c_alpha_minimal_balanced(q, alpha0=0.05):
    """Constant making the level ``alpha0`` for two observations in each of q+1 groups."""
    if q < 1:
        raise DomainError(f"need q >= 1, got {q}")
    n, j = 2 * (q + 1), q + 1
    g = null_law(n, j, q).isf(alpha0)
    log_b0 = q * math.log(2.0) - math.log(q + 1.0)
    bracket = g + log_b0
    log_c = (math.log(alpha0) + (q + 1) / (2.0 * (2 * q + 1)) * log_b0 + math.lgamma(q / 2.0)
             - (q / 2.0 - 1.0) * math.log(bracket))
    return CalibrationConstant(math.exp(log_c), 0.0, "minimal")


def c_alpha_anchored(n0, j, q, log_b0, alpha0=0.05, c_prior=0.0):
    """Constant making the adaptive level equal ``alpha0`` at the anchor design."""
    from .alpha import log_kernel

    if n0 <= j:
        raise DomainError(f"anchor sample size n0={n0} must exceed j={j}")
    log_k = log_kernel(log_b0, n0, j, q, c_prior=c_prior, alpha0=alpha0)
    if not math.isfinite(log_k):
        raise DegenerateDataError("adaptive level kernel vanishes at the anchor")
    return CalibrationConstant(math.exp(math.log(alpha0) - log_k), c_prior, "anchored")


def _log_pbic_factor(v):
    # log((1 - e^-v) / (sqrt(2) v)), with the v -> 0 limit -log(sqrt 2)
    if v < 0:
        raise DomainError(f"PBIC needs v >= 0, got {v!r}")
    if v == 0:
        return -0.5 * math.log(2.0)
    return math.log(-math.expm1(-v) / v) - 0.5 * math.log(2.0)


def pbic_single_term(v):
    """Prior constant of one entering parameter, vectorized over ``v``."""
    v = np.asarray(v, dtype=float)
    if np.any(v < 0):
        raise DomainError("PBIC needs v >= 0")
    safe = np.where(v > 0, v, 1.0)
    factor = np.where(v > 0, np.log(-np.expm1(-safe) / safe), 0.0)
    return -2.0 * (factor - 0.5 * math.log(2.0))


def pbic_constant(inputs):
    return (2.0 * math.fsum(_log_pbic_factor(t.v) for t in inputs.terms_i)
            - 2.0 * math.fsum(_log_pbic_factor(t.v) for t in inputs.terms_j))


def c_alpha_pbic(n, j, q, alpha0, C):
    law = null_law(n, j, q)
    g = law.isf(alpha0)
    return CalibrationConstant(math.exp(-law.rate * (g + C)), C, "pbic")


@dataclass(frozen=True)
class TESS:
    """Effective sample size and unit-information scale of a design."""

    n_eff: float
    d: float | None


def tess_balanced_anova(k, r):
    # no unit-information scale is defined for this design; callers supply d
    if k < 2 or r < 1:
        raise DomainError(f"need k >= 2 and r >= 1, got k={k}, r={r}")
    return TESS(n_eff=float(r), d=None)


def tess_findley(n):
    from .linmod import harmonic_information

    h = harmonic_information(n)
    return TESS(n_eff=h, d=1.0 / h)


def tess_two_means(n1, n2, var1, var2):
    if min(n1, n2) < 1 or min(var1, var2) <= 0:
        raise DomainError("need positive group sizes and variances")
    d = var1 / n1 + var2 / n2
    return TESS(n_eff=max(n1 * n1 / var1, n2 * n2 / var2) * d, d=d)


def calibrate(strategy, n, j, q):
    """Resolve a strategy into its constant for a design of size (n, j, q)."""
    kind = strategy.kind
    if kind is StrategyKind.SIMPLE:
        return c_alpha_simple(n, j, q, strategy.alpha0)
    if kind is StrategyKind.MINIMAL:
        return c_alpha_minimal_balanced(q, strategy.alpha0)
    if kind is StrategyKind.ANCHORED:
        if strategy.anchor_log_b is None:
            raise DomainError("anchored calibration of a general design needs anchor_log_b")
        return c_alpha_anchored(strategy.anchor_n, j, q, strategy.anchor_log_b, strategy.alpha0)
    C = pbic_constant(strategy.pbic)
    return c_alpha_pbic(n, j, q, strategy.alpha0, C)
