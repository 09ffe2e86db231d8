"""Monte Carlo experiments and table generators.

Every outer replicate draws from its own stream,
``default_rng(SeedSequence(seed, spawn_key=(rep,)))``, so results do not
depend on how replicates are scheduled across workers.
"""

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import special
from .alpha import (
    anova_adaptive_alpha,
    alpha_for_design,
    bic_adaptive_alpha,
    pbic_alpha_values,
)
from .calibration import (
    CalibrationStrategy,
    PBICInputs,
    pbic_single_term,
    tess_findley,
    tess_two_means,
)
from .distcore import PowerDesign, exact_null_law, null_law, solve_replicates
from .errors import DomainError
from .linmod import anova_log_b, harmonic_information, two_means_log_b

# cells per generated block, keeps memory bounded for large r
BLOCK_CELLS = 2_000_000
# asymptotic efficiency factor of the median relative to the mean
MEDIAN_SE_FACTOR = math.sqrt(math.pi / 2.0)

ADJUSTMENTS = (None, "simple", "pbic")
P_METHODS = ("exact", "gamma")


@dataclass(frozen=True)
class Table3Config:
    r: int
    K: int = 1000
    f: float = 0.25
    sigma: float = 1.0
    p_window: tuple = (0.01, 0.05)
    outer_reps: int = 100
    seed: int = 20240101
    adjustment: str | None = None
    alpha0: float = 0.05
    p_method: str = "exact"

    def __post_init__(self):
        if self.r < 2:
            raise DomainError(f"need r >= 2, got {self.r}")
        if self.K < 1 or self.outer_reps < 1:
            raise DomainError("K and outer_reps must be at least 1")
        lo, hi = self.p_window
        if not 0 <= lo < hi <= 1:
            raise DomainError(f"window must satisfy 0 <= lower < upper <= 1, got {self.p_window}")
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if self.adjustment not in ADJUSTMENTS:
            raise DomainError(f"adjustment must be one of {ADJUSTMENTS}, got {self.adjustment!r}")
        if self.p_method not in P_METHODS:
            raise DomainError(f"p_method must be one of {P_METHODS}, got {self.p_method!r}")

    @classmethod
    def desk(cls, r, **kw):
        """Scaled-down defaults: K=1000, 20 outer replicates."""
        kw.setdefault("K", 1000)
        kw.setdefault("outer_reps", 20)
        return cls(r=r, **kw)


@dataclass(frozen=True)
class SimResult:
    pct_from_null: float
    mc_stderr: float
    counts: tuple
    low_confidence: bool
    per_rep: tuple = field(default=(), repr=False)

    def to_dict(self):
        return {
            "pct_from_null": self.pct_from_null,
            "mc_stderr": self.mc_stderr,
            "counts": [list(c) for c in self.counts],
            "low_confidence": self.low_confidence,
        }


def rep_rng(seed, rep):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep,)))


def _two_group_pvalues(y1, y2, cfg):
    r = cfg.r
    n, j = 2 * r, 2
    m1, m2 = y1.mean(axis=1), y2.mean(axis=1)
    within = ((y1 - m1[:, None]) ** 2).sum(axis=1) + ((y2 - m2[:, None]) ** 2).sum(axis=1)
    between = (m1 - m2) ** 2 * (r / 2.0)
    total = within + between
    ratio = within / total
    if cfg.p_method == "exact":
        p, _ = special.betainc_pair((n - j) / 2.0, 0.5, ratio, between / total)
    else:
        T = -(n - 1) * np.log(ratio)
        p = null_law(n, j, 1).sf(T)
    return np.asarray(p), m1 - m2, within


def _adaptive_levels(diff, within, cfg):
    r = cfg.r
    n, j = 2 * r, 2
    log_b = two_means_log_b(r, r)
    if cfg.adjustment == "simple":
        res = alpha_for_design(log_b, n, j, 1, CalibrationStrategy.simple(cfg.alpha0))
        return np.full(diff.shape, res.alpha_adaptive)
    # plug-in PBIC: xi = beta_hat^2, d = 2 s^2 / r, n_eff = 2 r
    s2 = within / (n - j)
    d = 2.0 * s2 / r
    v = diff ** 2 / (d * (1.0 + 2.0 * r))
    return pbic_alpha_values(log_b, n, j, 1, pbic_single_term(v), cfg.alpha0)


def _table3_rep(cfg, rep):
    rng = rep_rng(cfg.seed, rep)
    lo, hi = cfg.p_window
    total = 2 * cfg.K
    block = max(1, BLOCK_CELLS // cfg.r)
    from_null = from_alt = 0
    for start in range(0, total, block):
        stop = min(start + block, total)
        rows = stop - start
        is_null = np.arange(start, stop) < cfg.K
        shift = np.where(is_null, 0.0, cfg.f * cfg.sigma)
        y1 = cfg.sigma * rng.standard_normal((rows, cfg.r))
        y2 = cfg.sigma * rng.standard_normal((rows, cfg.r)) + shift[:, None]
        p, diff, within = _two_group_pvalues(y1, y2, cfg)
        if cfg.adjustment is None:
            hit = (p > lo) & (p < hi)
        else:
            hit = (p < _adaptive_levels(diff, within, cfg)) & (p < hi)
        from_null += int(np.count_nonzero(hit & is_null))
        from_alt += int(np.count_nonzero(hit & ~is_null))
    return from_null, from_alt


def table3_experiment(cfg, workers=1):
    """False-positive share among significant two-sample tests.

    Without adjustment a test counts when its p-value lies strictly inside
    ``cfg.p_window``.  With an adjustment it counts when ``p`` is below both
    the per-test adaptive level and the window's upper end.
    """
    reps = range(cfg.outer_reps)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda rep: _table3_rep(cfg, rep), reps))
    else:
        counts = [_table3_rep(cfg, rep) for rep in reps]
    pcts = [100.0 * a / (a + b) for a, b in counts if a + b]
    low = len(pcts) < len(counts) or not pcts
    if not pcts:
        return SimResult(math.nan, math.nan, tuple(counts), True, ())
    med = float(np.median(pcts))
    se = MEDIAN_SE_FACTOR * float(np.std(pcts, ddof=1)) / math.sqrt(len(pcts)) if len(pcts) > 1 else math.nan
    return SimResult(med, se, tuple(counts), low, tuple(pcts))


def ks_distance(sample, cdf):
    """Two-sided Kolmogorov-Smirnov distance of a sample from a CDF callable."""
    x = np.sort(np.asarray(sample, dtype=float))
    N = x.size
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, N + 1)
    return float(max(np.max(i / N - F), np.max(F - (i - 1) / N)))


@dataclass(frozen=True)
class MCCheck:
    ks_distance: float
    ks_exact: float
    N: int
    n: int
    j: int
    q: int


def null_law_mc_check(n, j, q, N=100_000, seed=0, chunk=20_000):
    """Simulate T under the null submodel and compare with its laws.

    ``ks_distance`` is measured against the Gamma law of T and
    ``ks_exact`` against the Beta law of the residual ratio.
    """
    if not 1 <= q <= j < n:
        raise DomainError(f"need 1 <= q <= j < n, got n={n}, j={j}, q={q}")
    if N < 1000:
        raise DomainError(f"need N >= 1000, got {N}")
    rng = rep_rng(seed, 0)
    i = j - q
    X = np.hstack([np.ones((n, 1)), rng.standard_normal((n, j - 1))])
    Q_j, _ = np.linalg.qr(X)
    Q_i = np.linalg.qr(X[:, :i])[0] if i else np.zeros((n, 0))
    ratios = np.empty(N)
    for start in range(0, N, chunk):
        stop = min(start + chunk, N)
        Y = rng.standard_normal((n, stop - start))
        res_j = Y - Q_j @ (Q_j.T @ Y)
        res_i = Y - Q_i @ (Q_i.T @ Y)
        ratios[start:stop] = (res_j ** 2).sum(axis=0) / (res_i ** 2).sum(axis=0)
    T = -(n - 1) * np.log(ratios)
    gamma = null_law(n, j, q)
    beta = exact_null_law(n, j, q)
    return MCCheck(
        ks_distance=ks_distance(T, gamma.cdf),
        ks_exact=ks_distance(ratios, beta.ratio_cdf),
        N=N, n=n, j=j, q=q,
    )


REQUIRES_INPUT = "requires-input"

T1_K = (2, 5, 10)
T1_R = (50, 100, 500, 1000)
T2_R = (4, 10, 50, 100, 500, 1000)
T5_N = (10, 20, 30, 40, 50, 100, 1000, 10000)
T6_DESIGNS = ((10, 10), (10, 100), (10, 500), (100, 10), (100, 100), (100, 500))


@dataclass(frozen=True)
class Table:
    table_id: str
    params: tuple
    rows: tuple

    @property
    def columns(self):
        return self.params + ("method", "alpha_adaptive")

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_cell(row[c]) for c in self.columns])
        return buf.getvalue()

    def value(self, method, **params):
        for row in self.rows:
            if row["method"] == method and all(row[k] == v for k, v in params.items()):
                return row["alpha_adaptive"]
        raise KeyError((method, params))


def _cell(x):
    return repr(x) if isinstance(x, float) else str(x)


def _table1(alpha0, power, f):
    rows = []
    for k in T1_K:
        r0 = solve_replicates(PowerDesign(k, f, alpha0, power))
        for r in T1_R:
            lin = anova_adaptive_alpha(k, r, CalibrationStrategy.anchored(k * r0, alpha0))
            rows.append({"k": k, "r": r, "r0": r0, "method": "linear-anchored",
                         "alpha_adaptive": lin.alpha_adaptive})
            bic = bic_adaptive_alpha(r, k - 1, alpha0, anchor_n=r0)
            rows.append({"k": k, "r": r, "r0": r0, "method": "bic-anchored",
                         "alpha_adaptive": bic.alpha_adaptive})
    return Table("T1", ("k", "r", "r0"), tuple(rows))


def _table2(alpha0, xi, d):
    rows = []
    for r in T2_R:
        for method, strat in (("minimal", CalibrationStrategy.minimal(alpha0)),
                              ("simple", CalibrationStrategy.simple(alpha0))):
            res = anova_adaptive_alpha(2, r, strat)
            rows.append({"r": r, "method": method, "alpha_adaptive": res.alpha_adaptive})
        if xi is None or d is None:
            value = REQUIRES_INPUT
        else:
            inputs = PBICInputs.entering([xi], [d], [float(r)])
            value = alpha_for_design(anova_log_b(2, r), 2 * r, 2, 1,
                                     CalibrationStrategy.pbic_strategy(inputs, alpha0)).alpha_adaptive
        rows.append({"r": r, "method": "pbic", "alpha_adaptive": value})
    return Table("T2", ("r",), tuple(rows))


def _table5(alpha0, xi):
    rows = []
    for n in T5_N:
        rows.append({"n": n, "method": "bic",
                     "alpha_adaptive": bic_adaptive_alpha(n, 1, alpha0).alpha_adaptive})
        if xi is None:
            value = REQUIRES_INPUT
        else:
            t = tess_findley(n)
            inputs = PBICInputs.entering([xi], [t.d], [t.n_eff])
            value = alpha_for_design(math.log(harmonic_information(n)), n, 1, 1,
                                     CalibrationStrategy.pbic_strategy(inputs, alpha0)).alpha_adaptive
        rows.append({"n": n, "method": "pbic", "alpha_adaptive": value})
    return Table("T5", ("n",), tuple(rows))


def _table6(alpha0, xi, var1, var2):
    rows = []
    for n1, n2 in T6_DESIGNS:
        n = n1 + n2
        rows.append({"n1": n1, "n2": n2, "method": "bic",
                     "alpha_adaptive": bic_adaptive_alpha(n, 1, alpha0).alpha_adaptive})
        if xi is None:
            value = REQUIRES_INPUT
        else:
            t = tess_two_means(n1, n2, var1, var2)
            inputs = PBICInputs.entering([xi], [t.d], [t.n_eff])
            value = alpha_for_design(two_means_log_b(n1, n2), n, 2, 1,
                                     CalibrationStrategy.pbic_strategy(inputs, alpha0)).alpha_adaptive
        rows.append({"n1": n1, "n2": n2, "method": "pbic", "alpha_adaptive": value})
    return Table("T6", ("n1", "n2"), tuple(rows))


TABLE_IDS = ("T1", "T2", "T5", "T6")


def reproduce_table(table_id, alpha0=0.05, pbic_xi=None, pbic_d=None,
                    var1=14.0, var2=140.0, power=0.8, f=0.25):
    """Regenerate one of the published alpha tables in long format.

    PBIC cells need an effect estimate ``pbic_xi`` (and ``pbic_d`` for the
    ANOVA table); without them they read ``requires-input``.
    """
    table_id = table_id.upper()
    if table_id == "T1":
        return _table1(alpha0, power, f)
    if table_id == "T2":
        return _table2(alpha0, pbic_xi, pbic_d)
    if table_id == "T5":
        return _table5(alpha0, pbic_xi)
    if table_id == "T6":
        return _table6(alpha0, pbic_xi, var1, var2)
    raise DomainError(f"unknown table {table_id!r}; choose from {', '.join(TABLE_IDS)}")
