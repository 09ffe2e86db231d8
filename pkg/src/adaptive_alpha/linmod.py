"""Linear-model algebra for nested Gaussian model comparisons.

Fits go through a QR factorization; the design information ratio
``b = |X_j' X_j| / |X_i' X_i|`` is always handled on the log scale.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDataError, DomainError, SingularDesignError

RANK_TOL = 1e-10
NESTING_TOL = 1e-8


def _as_design(X, n=None):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise DomainError("design must be a 2-d array")
    if n is not None and X.shape[0] != n:
        raise DomainError(f"design has {X.shape[0]} rows, expected {n}")
    if not np.all(np.isfinite(X)):
        raise DomainError("design contains non-finite entries")
    return X


def _qr_r(X):
    """R factor of X with a numerical rank check."""
    if X.shape[1] == 0:
        return np.zeros((0, 0))
    if X.shape[0] < X.shape[1]:
        raise SingularDesignError(f"{X.shape[1]} columns but only {X.shape[0]} rows")
    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    scale = max(np.linalg.norm(X, axis=0).max(), 1.0)
    if diag.min() <= RANK_TOL * scale:
        raise SingularDesignError("design matrix is rank deficient")
    return Q, R


@dataclass(frozen=True)
class NestedPair:
    """Two nested designs, ``span(X_i)`` contained in ``span(X_j)``.

    ``X_i`` may have zero columns, which encodes the empty null model.
    ``tess`` optionally records the effective sample size of the design.
    """

    X_i: np.ndarray
    X_j: np.ndarray
    tess: float | None = None
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        X_j = _as_design(self.X_j)
        X_i = _as_design(self.X_i, X_j.shape[0]) if np.size(self.X_i) else np.zeros((X_j.shape[0], 0))
        object.__setattr__(self, "X_i", X_i)
        object.__setattr__(self, "X_j", X_j)
        n, i, j = X_j.shape[0], X_i.shape[1], X_j.shape[1]
        if not j > i >= 0:
            raise DomainError(f"need j > i >= 0, got i={i}, j={j}")
        if n <= j:
            raise DegenerateDataError(f"n={n} must exceed the number of columns j={j}")
        _qr_r(X_j)
        if i:
            _qr_r(X_i)
            coef, *_ = np.linalg.lstsq(X_j, X_i, rcond=None)
            resid = np.linalg.norm(X_i - X_j @ coef)
            if resid > NESTING_TOL * max(np.linalg.norm(X_i), 1.0):
                raise DomainError("X_i is not contained in the column span of X_j")

    @property
    def n(self):
        return self.X_j.shape[0]

    @property
    def i(self):
        return self.X_i.shape[1]

    @property
    def j(self):
        return self.X_j.shape[1]

    @property
    def q(self):
        return self.j - self.i


@dataclass(frozen=True)
class FitSummary:
    coefficients: np.ndarray
    rss: float
    s2: float
    n: int


def ols_fit(X, y):
    """Least-squares fit with the maximum-likelihood variance ``rss / n``."""
    y = np.asarray(y, dtype=float).ravel()
    X = _as_design(X, y.shape[0])
    n = y.shape[0]
    if X.shape[1] == 0:
        rss = float(y @ y)
        return FitSummary(np.zeros(0), rss, rss / n, n)
    Q, R = _qr_r(X)
    qty = Q.T @ y
    coef = np.linalg.solve(R, qty)
    resid = y - X @ coef
    rss = float(resid @ resid)
    return FitSummary(coef, rss, rss / n, n)


@dataclass(frozen=True)
class LRStatistic:
    ratio: float
    T: float
    rss_i: float
    rss_j: float


def lr_statistic(pair, y):
    """Residual ratio ``rss_j / rss_i`` and ``T = -(n - 1) log(ratio)``."""
    y = np.asarray(y, dtype=float).ravel()
    if y.shape[0] != pair.n:
        raise DomainError(f"response has length {y.shape[0]}, expected {pair.n}")
    fit_i = ols_fit(pair.X_i, y)
    fit_j = ols_fit(pair.X_j, y)
    if fit_i.rss <= 0:
        raise DegenerateDataError("the null model fits the response exactly (rss_i = 0)")
    ratio = min(fit_j.rss / fit_i.rss, 1.0)
    T = -(pair.n - 1) * math.log(ratio) if ratio > 0 else math.inf
    return LRStatistic(ratio=ratio, T=max(T, 0.0), rss_i=fit_i.rss, rss_j=fit_j.rss)


def log_gram_det(X):
    """``log |X' X|`` from the R factor of X."""
    X = _as_design(X)
    if X.shape[1] == 0:
        return 0.0
    _, R = _qr_r(X)
    return float(2.0 * np.sum(np.log(np.abs(np.diag(R)))))


def log_b_direct(pair):
    return log_gram_det(pair.X_j) - log_gram_det(pair.X_i)


@dataclass(frozen=True)
class PredictorStats:
    """Sample variances and correlation blocks of retained/entering predictors.

    ``variances`` holds the (n - 1)-divisor variances of the entering
    predictors; ``R_i`` is the correlation matrix of the retained
    non-intercept predictors (possibly 0 x 0), ``R_ij`` the retained-by-entering
    cross correlations and ``R_jmi`` the entering predictors' correlations.
    """

    variances: np.ndarray
    R_i: np.ndarray
    R_ij: np.ndarray
    R_jmi: np.ndarray
    n: int

    @classmethod
    def from_columns(cls, retained, entering):
        """Build from raw predictor columns (no intercept column)."""
        entering = _as_design(entering)
        n = entering.shape[0]
        retained = _as_design(retained, n) if np.size(retained) else np.zeros((n, 0))
        Z = np.hstack([retained, entering])
        Z = Z - Z.mean(axis=0)
        var = (Z * Z).sum(axis=0) / (n - 1)
        if np.any(var <= 0):
            raise SingularDesignError("a predictor is constant")
        sd = np.sqrt(var)
        R = (Z.T @ Z) / (n - 1) / np.outer(sd, sd)
        np.fill_diagonal(R, 1.0)
        p = retained.shape[1]
        return cls(variances=var[p:], R_i=R[:p, :p], R_ij=R[:p, p:], R_jmi=R[p:, p:], n=n)


def log_b_correlation(stats, q=None):
    """``log b`` from predictor variances and correlations.

    ``b = (n-1)^q * prod(s_l^2) * |R_jmi - R_ij' R_i^{-1} R_ij|``, valid when
    both models contain an intercept and the predictors are centered.
    """
    q = len(stats.variances) if q is None else q
    if stats.R_jmi.shape != (q, q) or len(stats.variances) != q:
        raise DomainError(f"correlation blocks do not match q={q} entering predictors")
    schur = np.array(stats.R_jmi, dtype=float)
    if stats.R_i.size:
        try:
            L = np.linalg.cholesky(stats.R_i)
        except np.linalg.LinAlgError:
            raise DomainError("retained-predictor correlation matrix is not positive definite")
        W = np.linalg.solve(L, stats.R_ij)
        schur = schur - W.T @ W
    sign, logdet = np.linalg.slogdet(schur)
    if sign <= 0:
        raise SingularDesignError("entering predictors are collinear with the retained ones")
    return q * math.log(stats.n - 1) + float(np.sum(np.log(stats.variances))) + float(logdet)


def make_anova_design(k, r):
    """Balanced one-way layout: intercept versus k group indicators."""
    if k < 2 or r < 2:
        raise DomainError(f"need k >= 2 and r >= 2, got k={k}, r={r}")
    X_j = np.kron(np.eye(k), np.ones((r, 1)))
    return NestedPair(X_i=np.ones((k * r, 1)), X_j=X_j, tess=float(r))


def anova_log_b(k, r):
    return (k - 1) * math.log(r) - math.log(k)


def make_two_means_design(n1, n2):
    """Columns (1, +-1/2): the difference of two means as a nested test."""
    if n1 < 2 or n2 < 2:
        raise DomainError(f"need n1, n2 >= 2, got {n1}, {n2}")
    half = np.r_[np.full(n1, 0.5), np.full(n2, -0.5)]
    X_j = np.column_stack([np.ones(n1 + n2), half])
    return NestedPair(X_i=np.ones((n1 + n2, 1)), X_j=X_j)


def two_means_log_b(n1, n2):
    return math.log(n1 * n2 / (n1 + n2))


def harmonic_information(n):
    """``sum_{i<=n} 1/i``, the Gram scalar of the 1/sqrt(i) regressor."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    return math.fsum(1.0 / i for i in range(1, n + 1))


def make_findley_design(n):
    """Single regressor 1/sqrt(i) tested against the empty model."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    x = 1.0 / np.sqrt(np.arange(1, n + 1))
    return NestedPair(X_i=np.zeros((n, 0)), X_j=x[:, None], tess=harmonic_information(n))
