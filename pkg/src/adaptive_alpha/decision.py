"""End-to-end nested-model tests with adaptive thresholds."""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import special
from .alpha import alpha_for_design
from .distcore import null_law
from .errors import DatasetError, DomainError, SingularDesignError
from .linmod import NestedPair, PredictorStats, log_b_correlation, log_b_direct, lr_statistic

LOG_B_AGREEMENT = 1e-8


@dataclass(frozen=True)
class TestReport:
    __test__ = False  # keep pytest from collecting this class

    T: float
    p_exact: float
    p_gamma: float
    alpha_adaptive: float
    classical_alpha: float
    reject_adaptive: bool
    reject_classical: bool
    log_b: float
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


@dataclass(frozen=True)
class RegressionDiagnostics:
    response: str
    retained: tuple
    entering: tuple
    variances: dict
    correlations: dict
    log_b_direct: float
    log_b_correlation: float

    @property
    def b(self):
        return math.exp(self.log_b_direct)

    def to_dict(self):
        out = asdict(self)
        out["b"] = self.b
        return out


def _p_values(lr, n, j, q):
    if lr.ratio <= 0:
        return 0.0, 0.0
    p_gamma = float(null_law(n, j, q).sf(lr.T))
    # P(Beta((n-j)/2, q/2) < ratio), complement passed exactly
    p_exact, _ = special.betainc_pair((n - j) / 2.0, q / 2.0, lr.ratio,
                                      (lr.rss_i - lr.rss_j) / lr.rss_i)
    return float(p_exact), p_gamma


def run_nested_test(pair, y, strategy):
    """Likelihood-ratio test of ``pair.X_i`` against ``pair.X_j``.

    Rejection uses the Gamma-law p-value, compared strictly against the
    adaptive level and against ``strategy.alpha0``.
    """
    lr = lr_statistic(pair, y)
    n, i, j, q = pair.n, pair.i, pair.j, pair.q
    p_exact, p_gamma = _p_values(lr, n, j, q)
    log_b = log_b_direct(pair)
    res = alpha_for_design(log_b, n, j, q, strategy)
    diagnostics = {
        "g": res.g,
        "C": res.c_prior,
        "C_alpha": res.c_alpha,
        "adaptive_quantile": res.adaptive_quantile,
        "ratio": lr.ratio,
        "n": n,
        "i": i,
        "j": j,
        "q": q,
        "strategy": strategy.describe(),
    }
    return TestReport(
        T=lr.T,
        p_exact=p_exact,
        p_gamma=p_gamma,
        alpha_adaptive=res.alpha_adaptive,
        classical_alpha=strategy.alpha0,
        reject_adaptive=bool(p_gamma < res.alpha_adaptive),
        reject_classical=bool(p_gamma < strategy.alpha0),
        log_b=log_b,
        diagnostics=diagnostics,
    )


def run_regression_test(data, response, null_predictors, alt_predictors, strategy):
    """Compare intercept models on named dataset columns.

    Returns ``(TestReport, RegressionDiagnostics)``.  The intercept is part
    of both models and never counts as an entering predictor.
    """
    null_predictors = tuple(null_predictors)
    alt_predictors = tuple(alt_predictors)
    missing = [p for p in null_predictors if p not in alt_predictors]
    if missing:
        raise DomainError(f"null predictors {missing} are not in the alternative model")
    entering = tuple(p for p in alt_predictors if p not in null_predictors)
    if not entering:
        raise DomainError("the alternative model adds no predictors")
    if response in alt_predictors:
        raise DomainError(f"response {response!r} also appears as a predictor")
    y = data[response]
    n = data.n
    if n <= len(alt_predictors) + 1:
        raise DatasetError(f"n={n} rows is too few for {len(alt_predictors)} predictors and an intercept")

    ones = np.ones((n, 1))
    retained_cols = data.matrix(null_predictors)
    entering_cols = data.matrix(entering)
    pair = NestedPair(
        X_i=np.hstack([ones, retained_cols]),
        X_j=np.hstack([ones, retained_cols, entering_cols]),
        labels=("(intercept)",) + null_predictors + entering,
    )
    report = run_nested_test(pair, y, strategy)

    stats = PredictorStats.from_columns(retained_cols, entering_cols)
    lb_corr = log_b_correlation(stats, len(entering))
    if abs(lb_corr - report.log_b) > LOG_B_AGREEMENT * max(1.0, abs(report.log_b)):
        raise SingularDesignError(
            f"log b disagrees between determinant ({report.log_b!r}) and correlation ({lb_corr!r}) routes")
    diagnostics = RegressionDiagnostics(
        response=response,
        retained=null_predictors,
        entering=entering,
        variances={name: float(v) for name, v in zip(entering, stats.variances)},
        correlations={e: {r: float(stats.R_ij[a, b]) for a, r in enumerate(null_predictors)}
                      for b, e in enumerate(entering)},
        log_b_direct=report.log_b,
        log_b_correlation=lb_corr,
    )
    return report, diagnostics
