"""Null distributions of the nested-model likelihood-ratio statistic.

The statistic is ``T = -(n - 1) * log(rss_j / rss_i)``.  Under the smaller
model the residual ratio is exactly Beta((n - j)/2, q/2) distributed, and
``T`` is approximately Gamma(q/2, (n - j) / (2 (n - 1))) (shape/rate), which
tends to chi-square with q degrees of freedom as n grows.

This module also hosts the one-way ANOVA power calculation used to size
designed experiments.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import special
from .errors import ConvergenceError, DegenerateDataError, DomainError, NoSolutionError

QUANTILE_TOL = 1e-12
POISSON_TAIL_TOL = 1e-12


@dataclass(frozen=True)
class GammaLaw:
    """Gamma law parameterized by shape and rate."""

    shape: float
    rate: float

    def __post_init__(self):
        for name in ("shape", "rate"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"GammaLaw.{name} must be finite and positive, got {value!r}")

    @property
    def scale(self):
        return 1.0 / self.rate

    def sf(self, z):
        return gamma_upper_tail(self, z)

    def cdf(self, z):
        lower, _ = special.gammainc_pair(self.shape, self.rate * _nonneg(z))
        return lower

    def isf(self, alpha):
        return gamma_quantile_upper(self, alpha)


@dataclass(frozen=True)
class BetaNullLaw:
    """Exact null law: residual ratio ~ Beta(a, b), ``T = -scale * log(ratio)``."""

    a: float
    b: float
    scale: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0 and math.isfinite(self.b) and self.b > 0):
            raise DomainError(f"BetaNullLaw needs a > 0 and b > 0, got a={self.a!r}, b={self.b!r}")
        if not (math.isfinite(self.scale) and self.scale >= 1):
            raise DomainError(f"BetaNullLaw.scale must be >= 1, got {self.scale!r}")

    def ratio_cdf(self, x):
        return special.betainc(self.a, self.b, x)

    def sf(self, z):
        return exact_null_tail(self, z)


@dataclass(frozen=True)
class PowerDesign:
    """One-way ANOVA design target: k groups, Cohen's f, level and power."""

    k: int
    f: float
    alpha: float = 0.05
    power: float = 0.8

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise DomainError(f"need k >= 2 groups, got {self.k!r}")
        if not (0 < self.alpha < self.power < 1):
            raise DomainError("need 0 < alpha < power < 1")
        if not (math.isfinite(self.f) and self.f >= 0):
            raise DomainError(f"effect size f must be finite and >= 0, got {self.f!r}")


def _nonneg(z):
    z = np.asarray(z, dtype=float)
    if np.any(np.isnan(z)) or np.any(z < 0) or np.any(np.isposinf(-z)):
        raise DomainError("statistic value must be a non-negative number")
    return z


def null_law(n, j, q):
    """Gamma approximation to the null law of T for j regressors, q tested.

    ``j - q`` may be zero (the empty null model).
    """
    if q < 1 or j < q:
        raise DomainError(f"need 1 <= q <= j, got j={j}, q={q}")
    if n <= j:
        raise DegenerateDataError(f"n={n} leaves no residual degrees of freedom for j={j}")
    return GammaLaw(shape=q / 2.0, rate=(n - j) / (2.0 * (n - 1)))


def exact_null_law(n, j, q):
    if q < 1 or j < q:
        raise DomainError(f"need 1 <= q <= j, got j={j}, q={q}")
    if n <= j:
        raise DegenerateDataError(f"n={n} leaves no residual degrees of freedom for j={j}")
    return BetaNullLaw(a=(n - j) / 2.0, b=q / 2.0, scale=float(n - 1))


def chi2_law(q):
    return GammaLaw(shape=q / 2.0, rate=0.5)


def gamma_upper_tail(law, z):
    """P(Z > z) for Z ~ law."""
    z = _nonneg(z)
    _, upper = special.gammainc_pair(law.shape, law.rate * z)
    return upper


def _standard_gamma_isf(shape, alpha):
    # x with Q(shape, x) = alpha
    lgam = math.lgamma(shape)

    def tail(x):
        return special.gammainc_pair(shape, x)[1]

    # bracket with lo > 0 so geometric bisection is always available
    start = max(1.0, shape)
    if tail(start) < alpha:
        lo, hi = 0.5 * start, start
        while tail(lo) < alpha:
            lo, hi = 0.5 * lo, lo
            if lo < 1e-300:
                raise ConvergenceError("could not bracket the gamma quantile",
                                       shape=shape, alpha=alpha)
    else:
        lo, hi = start, 2.0 * start
        while tail(hi) >= alpha:
            lo, hi = hi, 2.0 * hi
            if hi > 1e300:
                raise ConvergenceError("could not bracket the gamma quantile",
                                       shape=shape, alpha=alpha)

    x = 0.5 * (lo + hi)
    width = hi - lo
    for _ in range(400):
        qx = tail(x)
        if abs(qx - alpha) <= QUANTILE_TOL * min(alpha, 1.0) or hi - lo <= 4e-16 * hi:
            return x
        if qx > alpha:
            lo = x
        else:
            hi = x
        # Newton on log Q, d/dx log Q = -pdf / Q; fall back to bisection
        # (geometric when the bracket spans orders of magnitude)
        log_pdf = (shape - 1.0) * math.log(x) - x - lgam
        candidate = x + (math.log(qx) - math.log(alpha)) * math.exp(math.log(qx) - log_pdf)
        if lo < candidate < hi and hi - lo < 0.5 * width:
            x = candidate
        elif lo > 0 and hi / lo > 4.0:
            x = math.sqrt(lo * hi)
        else:
            x = 0.5 * (lo + hi)
        width = min(width, hi - lo) if hi - lo < 0.5 * width else width * 0.75
    raise ConvergenceError("gamma quantile did not converge", shape=shape, alpha=alpha,
                           bracket=(lo, hi), last_tail=tail(x))


def gamma_quantile_upper(law, alpha):
    """Upper-tail quantile g with P(Z > g) = alpha."""
    if not (0 < alpha < 1):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    return _standard_gamma_isf(law.shape, alpha) / law.rate


def chi2_isf(alpha, q):
    return gamma_quantile_upper(chi2_law(q), alpha)


def exact_null_tail(law, z):
    """P(T > z) under the exact Beta law of the residual ratio."""
    z = _nonneg(z)
    x = np.exp(-z / law.scale)
    y = -np.expm1(-z / law.scale)
    lower, _ = special.betainc_pair(law.a, law.b, x, y)
    return lower


def asymptotic_upper_tail(law, g):
    """Leading-order asymptotic expansion of the gamma upper tail.

    ``g**(s-1) * exp(-rate*g) / ((1/rate)**(s-1) * Gamma(s))`` with
    ``s = law.shape``.  Not clamped: the value can exceed one for small g.
    """
    g = np.asarray(g, dtype=float)
    if np.any(~np.isfinite(g)) or np.any(g <= 0):
        raise DomainError("asymptotic tail requires g > 0")
    s = law.shape
    log_val = (s - 1.0) * (np.log(g) + np.log(law.rate)) - law.rate * g - math.lgamma(s)
    out = np.exp(log_val)
    return float(out) if out.ndim == 0 else out


def _f_isf(alpha, d1, d2):
    # central F upper quantile via bisection on the incomplete beta
    a, b = d1 / 2.0, d2 / 2.0
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if special.betainc_pair(a, b, mid)[1] > alpha:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    x = 0.5 * (lo + hi)
    return d2 * x / (d1 * (1.0 - x))


def noncentral_f_sf(c, d1, d2, nc):
    """P(F > c) for a noncentral F(d1, d2, nc) as a Poisson mixture of betas.

    Terms are summed until the remaining Poisson mass is below 1e-12.
    """
    if c <= 0:
        return 1.0
    x = d1 * c / (d1 * c + d2)
    y = d2 / (d1 * c + d2)
    lam = nc / 2.0
    total = 0.0
    mass = 0.0
    m = 0
    log_w = -lam
    while True:
        w = math.exp(log_w)
        total += w * special.betainc_pair(d1 / 2.0 + m, d2 / 2.0, x, y)[1]
        mass += w
        m += 1
        if 1.0 - mass < POISSON_TAIL_TOL and m > lam:
            break
        if m > 100000:
            raise ConvergenceError("noncentral F series did not converge", nc=nc)
        log_w += math.log(lam) - math.log(m) if lam > 0 else -math.inf
        if lam == 0:
            break
    return total


def anova_power(k, r, f, alpha=0.05):
    """Power of the one-way ANOVA F test with k groups of r replicates."""
    n = k * r
    d1, d2 = k - 1, n - k
    crit = _f_isf(alpha, d1, d2)
    return noncentral_f_sf(crit, d1, d2, n * f * f)


@functools.lru_cache(maxsize=256)
def solve_replicates(design, r_max=1_000_000):
    """Smallest per-group replicate count reaching the target power.

    Power is increasing in r, so the search doubles r until the target is
    met and then bisects.
    """
    if design.f == 0:
        raise NoSolutionError("power cannot exceed alpha when the effect size is zero")

    def enough(r):
        return anova_power(design.k, r, design.f, design.alpha) >= design.power

    lo, hi = 1, 2
    while not enough(hi):
        lo, hi = hi, 2 * hi
        if hi > r_max:
            raise NoSolutionError(f"target power not reached with r <= {r_max}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if enough(mid):
            hi = mid
        else:
            lo = mid
    return hi
