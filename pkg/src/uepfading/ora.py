"""First-order asymptotic time splits for orthogonal resource allocation.

Block i gets a fraction v_i of the channel uses and is decoded at rate
R / v_i, so it survives the fade with probability t(v_i). The optimum of
T(v) = sum_i d_i t(v_i) over the simplex is either (1, 0, ..., 0) or solves
U(v_i) = C_i(lambda), where U is proportional to t' and is unimodal on
(0, 1]. Its two inverses V+ (right of the peak) and V- (left of it) give
the candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._roots import bisect_decreasing, scan_roots
from .params import SplitSolution, importance_vector
from .special import DomainError

__all__ = [
    "UPeak",
    "t_scalar",
    "t_prime",
    "objective_T",
    "theta_c",
    "u_fn",
    "log_u",
    "u_peak",
    "v_plus",
    "v_minus",
    "ell_ora",
    "lambda_range",
    "s_plus",
    "s_minus",
    "local_candidates",
    "algorithm3_global",
    "algorithm4_local",
]

LN2 = math.log(2.0)
SCAN_POINTS = 2000
_CLAMP = 1e-12
# beyond this exp() of the exponent is 0 in double precision
_EXP_FLOOR = -745.0
_NEWTON_ITERS = 200


@dataclass(frozen=True)
class UPeak:
    v_int: float
    m_int: float


def _exponent(v, R, theta):
    # (2^{R/v} - 1) theta / (2^R - 1), inf where 2^{R/v} overflows
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(v > 0.0, R * LN2 / np.where(v > 0.0, v, 1.0), np.inf)
        return a, np.expm1(a) * theta / (2.0**R - 1.0)


def t_scalar(v, R, theta):
    """exp(-(2^{R/v} - 1) theta / (2^R - 1)) with t(0) = 0."""
    _, e = _exponent(v, R, theta)
    out = np.exp(-np.minimum(e, -_EXP_FLOOR))
    out = np.where(e >= -_EXP_FLOOR, 0.0, out)
    return float(out) if np.ndim(v) == 0 else out


def log_u(v, R, theta):
    """ln U(v); -inf at v = 0."""
    v = np.asarray(v, dtype=float)
    a, e = _exponent(v, R, theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(v > 0.0, a - 2.0 * np.log(np.where(v > 0.0, v, 1.0)) - e, -np.inf)
    out = np.where(np.isnan(out), -np.inf, out)
    return float(out) if np.ndim(v) == 0 else out


def u_fn(v, R, theta):
    """U(v) = 2^{R/v} / v^2 * t(v), U(0) = 0."""
    lu = np.asarray(log_u(v, R, theta))
    out = np.where(lu < _EXP_FLOOR, 0.0, np.exp(np.maximum(lu, _EXP_FLOOR)))
    return float(out) if np.ndim(v) == 0 else out


def t_prime(v, R, theta):
    """dt/dv = U(v) * theta R ln2 / (2^R - 1)."""
    return u_fn(v, R, theta) * theta * R * LN2 / (2.0**R - 1.0)


def objective_T(v, d, R, theta) -> float:
    v = np.asarray(v, dtype=float)
    d = np.asarray(d, dtype=float)
    if v.shape != d.shape:
        raise ValueError(f"split has {v.size} entries but d has {d.size}")
    return float(np.dot(d, t_scalar(v, R, theta)))


def theta_c(R) -> float:
    """Above this threshold every layer but the first is dropped."""
    return (2.0**R - 1.0) / 2.0**R * (2.0 / (R * LN2) + 1.0)


def _n_fn(v, R, theta):
    # sign of (ln U)'(v) times v^2; strictly decreasing in v
    with np.errstate(over="ignore"):
        return R * LN2 * (theta * 2.0 ** (R / v) / (2.0**R - 1.0) - 1.0) - 2.0 * v


def u_peak(R, theta) -> UPeak:
    """Interior maximiser of U, the root of N(v) = 0 on (0, 1)."""
    if theta >= theta_c(R):
        raise DomainError("U peaks at v = 1 when theta >= theta_c")
    v = bisect_decreasing(lambda s: _n_fn(s, R, theta), 0.0, 1.0, target=0.0, ftol=0.0)
    return UPeak(v_int=v, m_int=u_fn(v, R, theta))


def _clamp_level(C, R, theta, peak):
    C = np.asarray(C, dtype=float)
    lo, hi = 2.0**R * math.exp(-theta), peak.m_int
    if np.any(C < lo * (1.0 - _CLAMP)) or np.any(C > hi * (1.0 + _CLAMP)):
        raise DomainError(f"level outside [2^R e^-theta, M_int] = [{lo!r}, {hi!r}]")
    return np.clip(C, lo, hi)


def _solve_level(lc, lo, hi, R, theta, increasing):
    # safeguarded Newton on ln U(v) = lc inside [lo, hi]; (ln U)' = N(v) / v^2
    v = 0.5 * (lo + hi)
    for _ in range(_NEWTON_ITERS):
        f = log_u(v, R, theta) - lc
        below = (f < 0.0) if increasing else (f > 0.0)
        lo = np.where(below, v, lo)
        hi = np.where(below, hi, v)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            step = f * v * v / _n_fn(v, R, theta)
            nxt = v - step
        bad = ~np.isfinite(nxt) | (nxt <= lo) | (nxt >= hi)
        nxt = np.where(bad, 0.5 * (lo + hi), nxt)
        done = (np.abs(f) <= 1e-15) | (hi - lo <= 4e-16 * hi)
        v = np.where(done, v, nxt)
        if np.all(done):
            break
    return v


def v_plus(C, R, theta, peak: UPeak | None = None):
    """Root of U(v) = C on [v_int, 1]."""
    peak = peak or u_peak(R, theta)
    lc = np.log(_clamp_level(C, R, theta, peak))
    v = _solve_level(lc, np.full(lc.shape, peak.v_int), np.ones(lc.shape), R, theta, False)
    return float(v) if np.ndim(C) == 0 else v


def v_minus(C, R, theta, peak: UPeak | None = None):
    """Root of U(v) = C on [0, v_int]."""
    peak = peak or u_peak(R, theta)
    lc = np.log(_clamp_level(C, R, theta, peak))
    v = _solve_level(lc, np.zeros(lc.shape), np.full(lc.shape, peak.v_int), R, theta, True)
    return float(v) if np.ndim(C) == 0 else v


def ell_ora(theta, R, d, peak: UPeak | None = None) -> int:
    """Upper bound on the number of blocks given channel uses."""
    if theta >= theta_c(R):
        return 1
    peak = peak or u_peak(R, theta)
    d = np.asarray(d, dtype=float)
    ok = d >= 2.0**R * math.exp(-theta) / peak.m_int * d[0]
    return int(np.nonzero(ok)[0].max()) + 1


def lambda_range(theta, R, d, ell, peak: UPeak):
    """(lambda_low, lambda_upp(ell))."""
    scale = theta * R * LN2 / (2.0**R - 1.0)
    return 2.0**R * math.exp(-theta) * d[0] * scale, peak.m_int * d[ell - 1] * scale


def _levels(lam, theta, R, d, ell):
    lam = np.asarray(lam, dtype=float)[..., None]
    return lam * (2.0**R - 1.0) / (theta * np.asarray(d[:ell]) * R * LN2)


def _v_plus_all(lam, theta, R, d, ell, peak):
    return v_plus(_levels(lam, theta, R, d, ell), R, theta, peak)


def _v_minus_last(lam, theta, R, d, ell, peak):
    C = _levels(lam, theta, R, d, ell)
    v = v_plus(C, R, theta, peak)
    v[..., -1] = v_minus(C[..., -1], R, theta, peak)
    return v


def s_plus(lam, theta, R, d, ell, peak):
    return np.sum(_v_plus_all(lam, theta, R, d, ell, peak), axis=-1)


def s_minus(lam, theta, R, d, ell, peak):
    return np.sum(_v_minus_last(lam, theta, R, d, ell, peak), axis=-1)


def _embed(vs, K):
    out = np.zeros(K)
    out[: vs.size] = vs
    return out


def _unit(K):
    e = np.zeros(K)
    e[0] = 1.0
    return e


def _solution(v, d, R, theta, lam=None) -> SplitSolution:
    v = np.asarray(v, dtype=float)
    return SplitSolution(
        split=v,
        objective=objective_T(v, d, R, theta),
        ell=int(np.count_nonzero(v > 0.0)),
        lam=lam,
    )


def _best(cands):
    return max(cands, key=lambda s: (s.objective, -s.ell, s.split[0]))


def _plus_candidate(theta, R, d, ell, peak, lam_tol):
    lo, hi = lambda_range(theta, R, d, ell, peak)
    lam = bisect_decreasing(
        lambda t: float(s_plus(t, theta, R, d, ell, peak)), lo, hi, xtol=lam_tol
    )
    v = _embed(_v_plus_all(lam, theta, R, d, ell, peak), len(d))
    return _solution(v, d, R, theta, lam)


def _bracketed(theta, R, d, ell, peak):
    lo, hi = lambda_range(theta, R, d, ell, peak)
    if lo > hi:
        return False
    return float(s_plus(lo, theta, R, d, ell, peak)) >= 1.0 >= float(
        s_plus(hi, theta, R, d, ell, peak)
    )


def local_candidates(theta, R, d, lam_tol=0.0):
    """V+ candidates v^(ell) for every feasible block count, after (1, 0, ..., 0)."""
    d = importance_vector(d)
    K = d.size
    cands = [_solution(_unit(K), d, R, theta)]
    if K == 1 or theta >= theta_c(R):
        return cands
    peak = u_peak(R, theta)
    for ell in range(2, ell_ora(theta, R, d, peak) + 1):
        if _bracketed(theta, R, d, ell, peak):
            cands.append(_plus_candidate(theta, R, d, ell, peak, lam_tol))
    return cands


def algorithm4_local(theta, R, d, lam_tol=0.0) -> SplitSolution:
    """Strict local maximiser of T from V+ candidates."""
    return _best(local_candidates(theta, R, d, lam_tol))


def algorithm3_global(theta, R, d, scan_points=SCAN_POINTS, lam_tol=0.0) -> SplitSolution:
    """Global maximiser of T: V+ candidates plus every root of S^-(lambda) = 1."""
    d = importance_vector(d)
    K = d.size
    cands = [_solution(_unit(K), d, R, theta)]
    if K == 1 or theta >= theta_c(R):
        return cands[0]
    peak = u_peak(R, theta)
    for ell in range(2, ell_ora(theta, R, d, peak) + 1):
        lo, hi = lambda_range(theta, R, d, ell, peak)
        if lo > hi:
            continue
        if _bracketed(theta, R, d, ell, peak):
            cands.append(_plus_candidate(theta, R, d, ell, peak, lam_tol))
        roots = scan_roots(
            lambda t: s_minus(t, theta, R, d, ell, peak),
            lo,
            hi,
            points=scan_points,
            xtol=lam_tol,
        )
        for lam in roots:
            v = _embed(_v_minus_last(lam, theta, R, d, ell, peak), K)
            cands.append(_solution(v, d, R, theta, lam))
    return _best(cands)
