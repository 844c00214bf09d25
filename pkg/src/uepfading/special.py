"""Real-branch Lambert W, the map psi(y) = y^2 exp(-y) and its two inverses,
and the standard normal CDF.

All functions accept scalars or numpy arrays and return the same kind.
"""

import math

import numpy as np
from scipy.special import erfc

__all__ = [
    "DomainError",
    "BRANCH_POINT",
    "PSI_MAX",
    "lambert_w0",
    "lambert_wm1",
    "psi",
    "psi_inv_lower",
    "psi_inv_upper",
    "std_normal_cdf",
]

BRANCH_POINT = -math.exp(-1.0)
PSI_MAX = 4.0 * math.exp(-2.0)

# arguments this far below -1/e are treated as rounding noise and clamped
_BRANCH_SLACK = 1e-14
_PSI_SLACK = 1e-12
_MAX_ITER = 50
_STEP_TOL = 1e-14


class DomainError(ValueError):
    """Argument outside the real domain of a kernel."""


def _unwrap(x, out):
    return float(out) if np.ndim(x) == 0 else out


def _branch_arg(x):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)):
        raise DomainError("Lambert W argument must be finite")
    if np.any(x >= 0.0) or np.any(x < BRANCH_POINT - _BRANCH_SLACK):
        bad = x[(x >= 0.0) | (x < BRANCH_POINT - _BRANCH_SLACK)].ravel()[0]
        raise DomainError(f"Lambert W argument {bad!r} outside [-1/e, 0)")
    return np.maximum(x, BRANCH_POINT)


def _halley(x, w):
    for _ in range(_MAX_ITER):
        ew = np.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
            step = np.where((wp1 != 0.0) & (denom != 0.0), f / denom, 0.0)
        w = w - step
        if np.all(np.abs(step) <= _STEP_TOL * np.abs(w)):
            break
    return w


def _branch_series(x, sign):
    # expansion in p = sqrt(2(e x + 1)) around the branch point
    p = np.sqrt(np.maximum(2.0 * (math.e * x + 1.0), 0.0))
    return -1.0 + sign * p - p * p / 3.0 + sign * 11.0 / 72.0 * p**3


def lambert_w0(x):
    """Principal branch W_0 on [-1/e, 0), values in [-1, 0)."""
    xa = _branch_arg(x)
    near = xa < -0.25
    guess = np.where(near, _branch_series(xa, 1.0), xa - xa * xa + 1.5 * xa**3)
    w = _halley(xa, guess)
    w = np.where(xa == BRANCH_POINT, -1.0, np.clip(w, -1.0, 0.0))
    return _unwrap(x, w)


def lambert_wm1(x):
    """Secondary branch W_{-1} on [-1/e, 0), values in (-inf, -1]."""
    xa = _branch_arg(x)
    near = xa < -0.25
    with np.errstate(divide="ignore", invalid="ignore"):
        l1 = np.log(-xa)
        l2 = np.log(-l1)
        far = l1 - l2 + l2 / l1
    guess = np.where(near, _branch_series(xa, -1.0), far)
    w = _halley(xa, guess)
    w = np.where(xa == BRANCH_POINT, -1.0, np.minimum(w, -1.0))
    return _unwrap(x, w)


def psi(y):
    """psi(y) = y^2 exp(-y), with psi(inf) = 0."""
    ya = np.asarray(y, dtype=float)
    with np.errstate(invalid="ignore", over="ignore"):
        out = np.where(np.isinf(ya), 0.0, ya * ya * np.exp(-ya))
    return _unwrap(y, out)


def _psi_arg(c):
    c = np.asarray(c, dtype=float)
    if np.any(~(c > 0.0)) or np.any(c > PSI_MAX + _PSI_SLACK):
        raise DomainError(f"psi level must lie in (0, 4/e^2], got {c.ravel()!r}")
    return np.minimum(c, PSI_MAX)


def psi_inv_lower(c):
    """Smaller root y in (0, 2] of psi(y) = c."""
    ca = _psi_arg(c)
    return _unwrap(c, -2.0 * lambert_w0(-0.5 * np.sqrt(ca)))


def psi_inv_upper(c):
    """Larger root y in [2, inf) of psi(y) = c."""
    ca = _psi_arg(c)
    return _unwrap(c, -2.0 * lambert_wm1(-0.5 * np.sqrt(ca)))


def std_normal_cdf(z):
    """Phi(z) = erfc(-z / sqrt 2) / 2, accurate deep into the lower tail."""
    za = np.asarray(z, dtype=float)
    return _unwrap(z, 0.5 * erfc(-za / math.sqrt(2.0)))
