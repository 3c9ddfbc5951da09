"""The J-function of a consistent Gaussian LLR and its inverse.

J(sigma) is the mutual information between a BPSK bit and an LLR distributed
as N(sigma^2/2, sigma^2). It is evaluated once by composite Gauss-Legendre
quadrature on a log-spaced sigma grid and then interpolated by cubic splines in the log
domain, which keeps both J and 1 - J accurate from 1e-300 up to ~1.
Outside the grid the small-sigma law J ~ sigma^2 / (8 ln 2) and the
large-sigma law log(1 - J) ~ -sigma^2 / 8 are used.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

SIGMA_MIN = 1e-3
SIGMA_MAX = 120.0
_GRID = 4000
_PANEL = 0.5
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _log_softplus(x: np.ndarray) -> np.ndarray:
    """log(log(1 + e^x)) without underflow for very negative x."""
    out = np.empty_like(x)
    neg = x < -30.0
    out[neg] = x[neg]
    out[~neg] = np.log(np.logaddexp(0.0, x[~neg]))
    return out


def _log_jc_quadrature(sigma: float) -> float:
    """log(1 - J(sigma)) = log E[log2(1 + exp(-L))] by quadrature over z."""
    lo = min(-12.0, -sigma / 2.0 - 12.0)
    hi = 12.0
    panels = int(np.ceil((hi - lo) / _PANEL))
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    z = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    llr = sigma * sigma / 2.0 + sigma * z
    log_terms = np.log(w) - 0.5 * z * z - 0.5 * np.log(2 * np.pi) + _log_softplus(-llr)
    top = log_terms.max()
    return float(top + np.log(np.exp(log_terms - top).sum()) - np.log(np.log(2.0)))


@lru_cache(maxsize=1)
def _tables():
    log_s = np.linspace(np.log(SIGMA_MIN), np.log(SIGMA_MAX), _GRID)
    log_jc = np.array([_log_jc_quadrature(s) for s in np.exp(log_s)])
    log_j = np.log(-np.expm1(log_jc))
    # quadrature noise must not break monotonicity of the inverse tables
    log_jc = np.minimum.accumulate(np.minimum(log_jc, 0.0))
    log_j = np.maximum.accumulate(log_j)
    return log_s, log_j, log_jc


@lru_cache(maxsize=1)
def _splines():
    log_s, lj, ljc = _tables()
    # each inverse is only queried on its side of the J = 1/2 split, where the table is strictly monotone
    lo = log_s <= np.log(4.0)
    hi = log_s >= np.log(1.0)
    return (
        CubicSpline(log_s, lj),
        CubicSpline(log_s, ljc),
        CubicSpline(lj[lo], log_s[lo]),
        CubicSpline(ljc[hi][::-1], log_s[hi][::-1]),
    )


def _eval(spline, x, lo, hi):
    return spline(np.clip(x, lo, hi))


_SPLIT_SIGMA = 2.0
_SPLIT_LOG = np.log(0.5)


def log_j(sigma) -> np.ndarray:
    """log J(sigma)."""
    s = np.maximum(np.asarray(sigma, dtype=float), 1e-300)
    log_s, lj, _ = _tables()
    ls = np.log(s)
    low = _eval(_splines()[0], ls, log_s[0], log_s[-1])
    low = np.where(ls < log_s[0], lj[0] + 2.0 * (ls - log_s[0]), low)
    with np.errstate(over="ignore", invalid="ignore"):
        high = np.log1p(-np.exp(_log_jc_upper(s)))
    return np.minimum(np.where(s < _SPLIT_SIGMA, low, high), 0.0)


def _log_jc_upper(s: np.ndarray) -> np.ndarray:
    log_s, _, ljc = _tables()
    out = _eval(_splines()[1], np.log(s), log_s[0], log_s[-1])
    return np.where(s > SIGMA_MAX, ljc[-1] - (s * s - SIGMA_MAX**2) / 8.0, out)


def log_jc(sigma) -> np.ndarray:
    """log(1 - J(sigma))."""
    s = np.maximum(np.asarray(sigma, dtype=float), 1e-300)
    with np.errstate(invalid="ignore"):
        low = np.log1p(-np.exp(log_j(np.minimum(s, _SPLIT_SIGMA))))
    return np.where(s < _SPLIT_SIGMA, low, _log_jc_upper(s))


def _log_one_minus(v: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(-np.expm1(np.minimum(v, 0.0)))


def sigma_from_log_j(value) -> np.ndarray:
    """Inverse of ``log_j``."""
    v = np.minimum(np.asarray(value, dtype=float), 0.0)
    log_s, lj, _ = _tables()
    low = np.exp(_eval(_splines()[2], v, lj[0], _SPLIT_LOG))
    low = np.where(v < lj[0], np.exp(log_s[0] + (v - lj[0]) / 2.0), low)
    high = _sigma_from_log_jc_upper(_log_one_minus(np.where(v > _SPLIT_LOG, v, _SPLIT_LOG)))
    return np.where(v <= _SPLIT_LOG, low, high)


def _sigma_from_log_jc_upper(v: np.ndarray) -> np.ndarray:
    log_s, _, ljc = _tables()
    out = np.exp(_eval(_splines()[3], v, ljc[-1], _SPLIT_LOG))
    with np.errstate(invalid="ignore"):
        big = np.sqrt(SIGMA_MAX**2 + 8.0 * np.maximum(ljc[-1] - v, 0.0))
    return np.where(v < ljc[-1], big, out)


def sigma_from_log_jc(value) -> np.ndarray:
    """Inverse of ``log_jc``."""
    v = np.minimum(np.asarray(value, dtype=float), 0.0)
    high = _sigma_from_log_jc_upper(v)
    low = sigma_from_log_j(_log_one_minus(np.where(v > _SPLIT_LOG, v, _SPLIT_LOG)))
    return np.where(v <= _SPLIT_LOG, high, low)


def J(sigma) -> np.ndarray:
    """Mutual information for LLR standard deviation ``sigma``."""
    return np.exp(log_j(sigma))


def J_inv(mi) -> np.ndarray:
    """Inverse of ``J`` on (0, 1); 0 maps to 0 and 1 to +inf."""
    mi = np.asarray(mi, dtype=float)
    with np.errstate(divide="ignore"):
        out = sigma_from_log_j(np.log(np.clip(mi, 1e-300, 1.0)))
    out = np.where(mi <= 0.0, 0.0, out)
    return np.where(mi >= 1.0, np.inf, out)
