"""Regularized incomplete gamma and beta functions.

Both functions use the classical split between a power series (small
argument) and a Lentz continued fraction (large argument).  The series is
used below ``x = a + 1`` for the gamma function and below
``x = (a + 1) / (a + b + 2)`` for the beta function; each branch returns the
tail it computes without cancellation and the other tail as its complement.

All routines accept numpy arrays and broadcast their arguments.
"""

import math

import numpy as np

from .errors import ConvergenceError, DomainError

EPS = 1e-15
TINY = 1e-300
MAX_ITER = 20000

_lgamma = np.frompyfunc(math.lgamma, 1, 1)


def lgamma(x):
    """Elementwise ``log |Gamma(x)|`` as a float array."""
    return np.asarray(_lgamma(np.asarray(x, dtype=float)), dtype=float)


def lbeta(a, b):
    return lgamma(a) + lgamma(b) - lgamma(np.asarray(a) + np.asarray(b))


def _gamma_series(a, x):
    # lower regularized P(a, x); requires x > 0
    term = 1.0 / a
    total = term.copy()
    ap = a.copy()
    active = np.ones(a.shape, dtype=bool)
    for _ in range(MAX_ITER):
        ap[active] += 1.0
        term[active] *= x[active] / ap[active]
        total[active] += term[active]
        active &= np.abs(term) >= np.abs(total) * EPS
        if not active.any():
            break
    else:
        raise ConvergenceError("incomplete gamma series did not converge",
                               a=a[active][:3].tolist(), x=x[active][:3].tolist())
    return total * np.exp(-x + a * np.log(x) - lgamma(a))


def _gamma_cf(a, x):
    # upper regularized Q(a, x)
    b = x + 1.0 - a
    c = np.full(a.shape, 1.0 / TINY)
    d = 1.0 / np.where(np.abs(b) < TINY, TINY, b)
    h = d.copy()
    active = np.ones(a.shape, dtype=bool)
    for i in range(1, MAX_ITER + 1):
        an = -i * (i - a)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < TINY, TINY, d)
        c = b + an / c
        c = np.where(np.abs(c) < TINY, TINY, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) >= EPS
        if not active.any():
            break
    else:
        raise ConvergenceError("incomplete gamma continued fraction did not converge",
                               a=a[active][:3].tolist(), x=x[active][:3].tolist())
    return h * np.exp(-x + a * np.log(x) - lgamma(a))


def _gamma_pair_scalar(a, x):
    # same algorithm as the array path, in plain floats for quantile searches
    if x == 0.0:
        return 0.0, 1.0
    if math.isinf(x):
        return 1.0, 0.0
    log_front = -x + a * math.log(x) - math.lgamma(a)
    if x < a + 1.0:
        term = total = 1.0 / a
        ap = a
        for _ in range(MAX_ITER):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * EPS:
                break
        else:
            raise ConvergenceError("incomplete gamma series did not converge", a=a, x=x)
        p = total * math.exp(log_front)
        return p, 1.0 - p
    b = x + 1.0 - a
    c = 1.0 / TINY
    d = 1.0 / (b if abs(b) >= TINY else TINY)
    h = d
    for i in range(1, MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        d = d if abs(d) >= TINY else TINY
        c = b + an / c
        c = c if abs(c) >= TINY else TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    else:
        raise ConvergenceError("incomplete gamma continued fraction did not converge", a=a, x=x)
    q = h * math.exp(log_front)
    return 1.0 - q, q


def gammainc_pair(a, x):
    """Return ``(P(a, x), Q(a, x))``, the lower and upper regularized tails."""
    if isinstance(a, (float, int)) and isinstance(x, (float, int)):
        a, x = float(a), float(x)
        if not (math.isfinite(a) and a > 0):
            raise DomainError("incomplete gamma requires a finite shape a > 0")
        if math.isnan(x) or x < 0:
            raise DomainError("incomplete gamma requires x >= 0")
        return _gamma_pair_scalar(a, x)
    a, x = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(x, dtype=float))
    if np.any(~np.isfinite(a)) or np.any(a <= 0):
        raise DomainError("incomplete gamma requires a finite shape a > 0")
    if np.any(np.isnan(x)) or np.any(x < 0):
        raise DomainError("incomplete gamma requires x >= 0")
    lower = np.zeros(a.shape)
    upper = np.ones(a.shape)
    inf = np.isinf(x)
    lower[inf], upper[inf] = 1.0, 0.0
    ser = (x > 0) & (x < a + 1.0) & ~inf
    cf = (x >= a + 1.0) & ~inf
    if ser.any():
        p = _gamma_series(a[ser], x[ser])
        lower[ser], upper[ser] = p, 1.0 - p
    if cf.any():
        q = _gamma_cf(a[cf], x[cf])
        lower[cf], upper[cf] = 1.0 - q, q
    if lower.ndim == 0:
        return float(lower), float(upper)
    return lower, upper


def gammainc(a, x):
    return gammainc_pair(a, x)[0]


def gammaincc(a, x):
    return gammainc_pair(a, x)[1]


def _beta_cf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones(a.shape)
    d = 1.0 - qab * x / qap
    d = 1.0 / np.where(np.abs(d) < TINY, TINY, d)
    h = d.copy()
    active = np.ones(a.shape, dtype=bool)
    for m in range(1, MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / np.where(np.abs(d) < TINY, TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < TINY, TINY, c)
        h = np.where(active, h * d * c, h)
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / np.where(np.abs(d) < TINY, TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < TINY, TINY, c)
        delta = d * c
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) >= EPS
        if not active.any():
            break
    else:
        raise ConvergenceError("incomplete beta continued fraction did not converge",
                               a=a[active][:3].tolist(), b=b[active][:3].tolist())
    return h


def betainc_pair(a, b, x, y=None):
    """Return ``(I_x(a, b), 1 - I_x(a, b))``.

    ``y`` may be passed as an accurately computed ``1 - x``; this matters
    when ``x`` is within rounding distance of one.
    """
    a, b, x = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float),
                                  np.asarray(x, dtype=float))
    y = 1.0 - x if y is None else np.broadcast_to(np.asarray(y, dtype=float), x.shape)
    if np.any(~np.isfinite(a) | ~np.isfinite(b)) or np.any(a <= 0) or np.any(b <= 0):
        raise DomainError("incomplete beta requires finite a > 0 and b > 0")
    if np.any(np.isnan(x)) or np.any((x < 0) | (x > 1)):
        raise DomainError("incomplete beta requires 0 <= x <= 1")
    lower = np.where(x >= 1.0, 1.0, 0.0)
    upper = np.array(1.0 - lower)
    inner = (x > 0) & (x < 1) & (y > 0)
    if inner.any():
        ai, bi, xi, yi = a[inner], b[inner], x[inner], y[inner]
        log_front = ai * np.log(xi) + bi * np.log(yi) - lbeta(ai, bi)
        direct = xi < (ai + 1.0) / (ai + bi + 2.0)
        lo = np.empty(ai.shape)
        up = np.empty(ai.shape)
        if direct.any():
            s = direct
            v = np.exp(log_front[s]) * _beta_cf(ai[s], bi[s], xi[s]) / ai[s]
            lo[s], up[s] = v, 1.0 - v
        if (~direct).any():
            s = ~direct
            v = np.exp(log_front[s]) * _beta_cf(bi[s], ai[s], yi[s]) / bi[s]
            lo[s], up[s] = 1.0 - v, v
        lower[inner], upper[inner] = lo, up
    if lower.ndim == 0:
        return float(lower), float(upper)
    return lower, upper


def betainc(a, b, x, y=None):
    return betainc_pair(a, b, x, y)[0]
