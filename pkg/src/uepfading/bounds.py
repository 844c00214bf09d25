"""AWGN capacity, information-density variance and finite-blocklength
error upper bounds for an i.i.d. complex Gaussian codebook.

Rates are in bits per channel use, SNRs are linear. Every bound broadcasts
over numpy arrays in ``n``, ``R`` and ``rho``.
"""

import math

import numpy as np

from .special import std_normal_cdf

__all__ = ["capacity", "v_tot", "exp_exponent", "err_exp", "err_nor", "err_bound"]

LOG2E = 1.0 / math.log(2.0)
LN2 = math.log(2.0)
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_LAMBDA_TOL = 1e-10
# exp(-745) is the smallest positive double
_UNDERFLOW = 745.0


def _out(args, value):
    if all(np.ndim(a) == 0 for a in args):
        return float(value)
    return value


def capacity(rho):
    """C(rho) = log2(1 + rho)."""
    return _out((rho,), np.log1p(np.asarray(rho, dtype=float)) * LOG2E)


def v_tot(rho):
    """Total information density variance, (log2 e)^2 * 2 rho / (1 + rho)."""
    r = np.asarray(rho, dtype=float)
    return _out((rho,), LOG2E**2 * 2.0 * r / (1.0 + r))


def _gallager(lam, R, rho):
    return lam * (np.log1p(rho / (1.0 + lam)) - R * LN2)


def exp_exponent(R, rho):
    """max over lambda in [0, 1] of lambda ln(1 + rho/(1+lambda)) - lambda R ln 2.

    Golden-section search (the objective is concave in lambda) run to a
    bracket of 1e-10, then compared against both endpoints.
    """
    scalar = np.ndim(R) == 0 and np.ndim(rho) == 0
    R, rho = np.broadcast_arrays(np.asarray(R, dtype=float), np.asarray(rho, dtype=float))
    a = np.zeros(R.shape)
    b = np.ones(R.shape)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = _gallager(c, R, rho)
    fd = _gallager(d, R, rho)
    iters = int(math.ceil(math.log(_LAMBDA_TOL) / math.log(_GOLDEN)))
    for _ in range(iters):
        left = fc > fd
        a, b = np.where(left, a, c), np.where(left, d, b)
        probe = np.where(left, b - _GOLDEN * (b - a), a + _GOLDEN * (b - a))
        fp = _gallager(probe, R, rho)
        c, d = np.where(left, probe, d), np.where(left, c, probe)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
    inner = np.maximum(np.maximum(fc, fd), _gallager(np.ones(R.shape), R, rho))
    inner = np.maximum(inner, 0.0)
    return float(inner) if scalar else inner


def err_exp(n, R, rho):
    """Gallager random-coding bound exp(-n * exp_exponent(R, rho)), in [0, 1]."""
    n = np.asarray(n, dtype=float)
    expo = n * np.asarray(exp_exponent(R, rho))
    val = np.where(expo > _UNDERFLOW, 0.0, np.exp(-np.minimum(expo, _UNDERFLOW)))
    return _out((n, R, rho), np.clip(val, 0.0, 1.0))


def err_nor(n, R, rho):
    """Normal-approximation bound min{1, Phi(...) + 2/sqrt(n)} (log base 2 in the
    third-order term). Requires n > 0 and rho > 0."""
    n, R, rho = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (n, R, rho)))
    sn = np.sqrt(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = (sn * (R - np.log1p(rho) * LOG2E) + np.log2(n) / (2.0 * sn)) / np.sqrt(
            LOG2E**2 * 2.0 * rho / (1.0 + rho)
        )
        val = std_normal_cdf(arg) + 2.0 / sn
    val = np.where(np.isnan(val), 1.0, val)
    return _out((n, R, rho), np.minimum(val, 1.0))


def err_bound(n, R, rho):
    """min(err_nor, err_exp), with E(0, R, rho) = 1 and E(n, R, 0) = 1."""
    n, R, rho = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (n, R, rho)))
    trivial = (n <= 0.0) | (rho <= 0.0)
    ns = np.where(trivial, 1.0, n)
    rs = np.where(trivial, 1.0, rho)
    val = np.minimum(err_nor(ns, R, rs), err_exp(ns, R, rs))
    val = np.where(trivial, 1.0, val)
    return _out((n, R, rho), val)
