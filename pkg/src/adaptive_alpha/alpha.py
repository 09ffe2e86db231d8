"""Adaptive significance levels for nested linear models.

The level for testing q extra coefficients is

    alpha(b, n) = [g + log b + C]^(q/2 - 1)
                  / (b^rate * (1/rate)^(q/2 - 1) * Gamma(q/2)) * C_alpha

with ``rate = (n - j) / (2 (n - 1))``, ``g`` the upper-``alpha0`` quantile
of the Gamma null law, ``b`` the Gram determinant ratio, ``C`` a prior
constant (zero unless PBIC calibration is used) and ``C_alpha`` a
calibration constant.  Everything is evaluated in log space.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .calibration import (
    CalibrationStrategy,
    StrategyKind,
    c_alpha_anchored,
    calibrate,
)
from .distcore import chi2_isf, null_law
from .errors import DomainError
from .linmod import anova_log_b


@dataclass(frozen=True)
class AlphaResult:
    alpha_adaptive: float
    g: float
    adaptive_quantile: float
    log_b: float
    c_prior: float
    c_alpha: float
    strategy: str
    alpha0: float
    n: int
    j: int | None
    q: int

    @property
    def alpha_display(self):
        return min(max(self.alpha_adaptive, 0.0), 1.0)

    @property
    def b(self):
        return math.exp(self.log_b)

    def to_dict(self):
        return asdict(self)


def adaptive_quantile(g, log_b, c_prior=0.0):
    """Threshold on the T scale: the fixed quantile shifted by ``log b (+ C)``."""
    return g + log_b + c_prior


def log_kernel(log_b, n, j, q, c_prior=0.0, alpha0=0.05, g=None):
    """Log of the adaptive level without its calibration constant."""
    law = null_law(n, j, q)
    if g is None:
        g = law.isf(alpha0)
    bracket = adaptive_quantile(g, log_b, c_prior)
    if not bracket > 0:
        raise DomainError(
            f"g + log(b) + C = {g:.6g} + {log_b:.6g} + {c_prior:.6g} is not positive; "
            "log(b) is too small for the approximation to apply")
    s = q / 2.0 - 1.0
    return (s * math.log(bracket) - law.rate * log_b + s * math.log(law.rate)
            - math.lgamma(q / 2.0))


def adaptive_alpha(log_b, n, j, q, c_alpha, c_prior=0.0, alpha0=0.05, strategy="custom"):
    """Adaptive level for a nested pair with ``log b``, sizes (n, j, q) and constants."""
    if not c_alpha > 0:
        raise DomainError(f"c_alpha must be positive, got {c_alpha!r}")
    g = null_law(n, j, q).isf(alpha0)
    log_alpha = log_kernel(log_b, n, j, q, c_prior, alpha0, g=g) + math.log(c_alpha)
    return AlphaResult(
        alpha_adaptive=math.exp(log_alpha),
        g=g,
        adaptive_quantile=adaptive_quantile(g, log_b, c_prior),
        log_b=log_b,
        c_prior=c_prior,
        c_alpha=c_alpha,
        strategy=strategy,
        alpha0=alpha0,
        n=n,
        j=j,
        q=q,
    )


def alpha_for_design(log_b, n, j, q, strategy):
    """Calibrate with ``strategy`` and evaluate the adaptive level."""
    const = calibrate(strategy, n, j, q)
    return adaptive_alpha(log_b, n, j, q, const.c_alpha, const.c_prior,
                          strategy.alpha0, strategy.kind.value)


def anova_adaptive_alpha(k, r, strategy):
    """Balanced one-way ANOVA with k groups of r replicates.

    The null law is taken at the total sample size ``n = k r`` with
    ``j = k``.  For anchored calibration ``strategy.anchor_n`` is the total
    anchor sample size ``k * r0``.
    """
    if k < 2 or r < 2:
        raise DomainError(f"need k >= 2 and r >= 2, got k={k}, r={r}")
    n, j, q = k * r, k, k - 1
    log_b = anova_log_b(k, r)
    if strategy.kind is StrategyKind.ANCHORED and strategy.anchor_log_b is None:
        if strategy.anchor_n % k:
            raise DomainError(f"anchor_n={strategy.anchor_n} is not a multiple of k={k}")
        const = c_alpha_anchored(strategy.anchor_n, j, q, anova_log_b(k, strategy.anchor_n // k),
                                 strategy.alpha0)
        return adaptive_alpha(log_b, n, j, q, const.c_alpha, 0.0, strategy.alpha0, "anchored")
    return alpha_for_design(log_b, n, j, q, strategy)


def pbic_alpha_values(log_b, n, j, q, C, alpha0=0.05):
    """Vectorized PBIC-calibrated level for an array of prior constants ``C``."""
    law = null_law(n, j, q)
    g = law.isf(alpha0)
    C = np.asarray(C, dtype=float)
    bracket = g + log_b + C
    if np.any(bracket <= 0):
        raise DomainError("g + log(b) + C is not positive for some entries")
    s = q / 2.0 - 1.0
    log_alpha = (s * np.log(bracket) - law.rate * log_b + s * math.log(law.rate)
                 - math.lgamma(q / 2.0) - law.rate * (g + C))
    return np.exp(log_alpha)


def one_way_layout_alpha(group_sizes, c_alpha, alpha0=0.05):
    """Adaptive level of a one-way layout in its reduced group-size form.

    Uses ``b = prod(n_k) / n`` with the exponent fixed at the minimal-design
    value ``(q + 1) / (2 (2q + 1))`` and no ``(1/rate)`` factor.  With two
    observations per group and the minimal-balanced ``c_alpha`` it returns
    ``alpha0`` exactly.
    """
    sizes = [int(s) for s in group_sizes]
    if len(sizes) < 2 or min(sizes) < 1:
        raise DomainError("need at least two non-empty groups")
    m = len(sizes)
    q = m - 1
    n = sum(sizes)
    log_b = math.fsum(math.log(s) for s in sizes) - math.log(n)
    g = null_law(n, m, q).isf(alpha0)
    bracket = g + log_b
    if not bracket > 0:
        raise DomainError("g + log(b) is not positive")
    log_alpha = ((q / 2.0 - 1.0) * math.log(bracket) - (q + 1) / (2.0 * (2 * q + 1)) * log_b
                 - math.lgamma(q / 2.0) + math.log(c_alpha))
    return math.exp(log_alpha)


def _bic_log_kernel(n, q, chi2):
    s = q / 2.0 - 1.0
    return (s * math.log(chi2 + q * math.log(n)) - s * math.log(2.0)
            - (q / 2.0) * math.log(n) - math.lgamma(q / 2.0))


def bic_adaptive_alpha(n, q, alpha0=0.05, anchor_n=None):
    """BIC-based adaptive level for i.i.d. models.

    ``[chi2 + q log n]^(q/2-1) / (2^(q/2-1) n^(q/2) Gamma(q/2)) * C_alpha``;
    ``C_alpha = exp(-chi2 / 2)`` by default, or fixed so that the level is
    ``alpha0`` at ``anchor_n``.
    """
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if q < 1:
        raise DomainError(f"need q >= 1, got {q}")
    chi2 = chi2_isf(alpha0, q)
    if anchor_n is None:
        log_c, kind = -chi2 / 2.0, "bic-simple"
    else:
        log_c, kind = math.log(alpha0) - _bic_log_kernel(anchor_n, q, chi2), "bic-anchored"
    log_alpha = _bic_log_kernel(n, q, chi2) + log_c
    return AlphaResult(
        alpha_adaptive=math.exp(log_alpha),
        g=chi2,
        adaptive_quantile=chi2 + q * math.log(n),
        log_b=q * math.log(n),
        c_prior=0.0,
        c_alpha=math.exp(log_c),
        strategy=kind,
        alpha0=alpha0,
        n=n,
        j=None,
        q=q,
    )


__all__ = [
    "AlphaResult",
    "CalibrationStrategy",
    "adaptive_alpha",
    "adaptive_quantile",
    "alpha_for_design",
    "anova_adaptive_alpha",
    "bic_adaptive_alpha",
    "log_kernel",
    "one_way_layout_alpha",
    "pbic_alpha_values",
]
