"""First-order asymptotic power splits for superposition coding with SIC.

The problem is solved in the transformed variables x = M_B(alpha), which
live on the weighted simplex {x >= 0 : sum_i 2^{R(i-1)} x_i = 1}. There the
objective is G(x) = sum_i d_i exp(-theta / x_i), and a maximiser is either
(1, 0, ..., 0) or has the closed form x_i = theta / y_i(lambda) where the
y_i solve psi(y_i) = c_i(lambda) on one of the two Lambert branches.
"""

from __future__ import annotations

import math

import numpy as np

from ._roots import bisect_decreasing, scan_roots
from .params import SplitSolution, importance_vector
from .special import PSI_MAX, DomainError, lambert_w0, psi_inv_lower, psi_inv_upper

__all__ = [
    "g_scalar",
    "objective_G",
    "mb_forward",
    "mb_inverse",
    "single_layer_threshold",
    "ell_pds",
    "lambda_range",
    "x_minus",
    "h_minus",
    "h_plus",
    "local_candidates",
    "algorithm1_global",
    "algorithm2_local",
    "solve_k2",
]

_SPLIT_TOL = 1e-10
_NEG_TOL = 1e-12
SCAN_POINTS = 2000


def g_scalar(x, theta):
    """exp(-theta / x) with g(0) = 0."""
    xa = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(xa > 0.0, np.exp(-theta / np.where(xa > 0.0, xa, 1.0)), 0.0)
    return float(out) if np.ndim(x) == 0 else out


def objective_G(x, d, theta) -> float:
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    if x.shape != d.shape:
        raise ValueError(f"split has {x.size} entries but d has {d.size}")
    return float(np.dot(d, g_scalar(x, theta)))


def _weights(R, K):
    return 2.0 ** (R * np.arange(K))


def mb_forward(alpha, R) -> np.ndarray:
    """Power fractions alpha -> x_i = alpha_i - (2^R - 1) * sum_{j>i} alpha_j."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha < -_NEG_TOL) or abs(alpha.sum() - 1.0) > _SPLIT_TOL:
        raise DomainError("alpha is not a point of the probability simplex")
    beta = np.concatenate([np.cumsum(alpha[::-1])[::-1][1:], [0.0]])
    x = alpha - (2.0**R - 1.0) * beta
    bad = np.nonzero(x < -_NEG_TOL)[0]
    if bad.size:
        i = int(bad[0])
        raise DomainError(
            f"alpha_{i + 1} = {alpha[i]!r} is below (2^R - 1) times the residual power"
        )
    return np.maximum(x, 0.0)


def mb_inverse(x, R) -> np.ndarray:
    """Backward recursion alpha_K = x_K, alpha_i = x_i + (2^R - 1) beta_i."""
    x = np.asarray(x, dtype=float)
    if np.any(x < -_NEG_TOL):
        raise DomainError("x has negative entries")
    if abs(np.dot(_weights(R, x.size), x) - 1.0) > _SPLIT_TOL:
        raise DomainError("x violates sum_i 2^{R(i-1)} x_i = 1")
    x = np.maximum(x, 0.0)
    alpha = np.empty_like(x)
    beta = 0.0
    for i in range(x.size - 1, -1, -1):
        alpha[i] = x[i] + (2.0**R - 1.0) * beta
        beta += alpha[i]
    return alpha


def single_layer_threshold(R, d) -> float:
    """-2 W_0(-(1/e) sqrt(d_2 / (2^R d_1))); above it the optimum is (1, 0, ..., 0)."""
    return -2.0 * lambert_w0(-math.exp(-1.0) * math.sqrt(d[1] / (2.0**R * d[0])))


def ell_pds(theta, R, d) -> int:
    """Upper bound on the number of layers carried by an optimal split."""
    d = np.asarray(d, dtype=float)
    if theta >= 2.0:
        return 1
    i = np.arange(1, d.size + 1)
    rhs = (2.0**R / d[0]) * PSI_MAX / (theta**2 * math.exp(-theta))
    ok = 2.0 ** (i * R) / d <= rhs
    # i = 1 always qualifies since psi(theta) <= 4/e^2
    return int(i[ok].max()) if ok.any() else 1


def lambda_range(theta, R, d, ell):
    """(lambda_min, lambda_max(ell)) bracketing the multiplier for ell layers."""
    lam_min = d[0] * theta * math.exp(-theta)
    lam_max = PSI_MAX * d[ell - 1] / (theta * 2.0 ** (R * (ell - 1)))
    return lam_min, lam_max


def _levels(lam, theta, R, d, ell):
    # c_i(lambda), clamped at the psi maximum against rounding at lambda_max
    lam = np.asarray(lam, dtype=float)[..., None]
    c = lam * theta * _weights(R, ell) / np.asarray(d[:ell])
    over = c > PSI_MAX
    if np.any(c[over] > PSI_MAX * (1.0 + 1e-12)):
        raise DomainError("lambda beyond lambda_max for this layer count")
    return np.minimum(c, PSI_MAX)


def x_minus(lam, theta, R, d, ell):
    """Principal-branch coordinates x_i^-(lambda), i = 1..ell (last axis)."""
    return theta / psi_inv_lower(_levels(lam, theta, R, d, ell))


def h_minus(lam, theta, R, d, ell):
    return np.sum(_weights(R, ell) * x_minus(lam, theta, R, d, ell), axis=-1)


def _x_plus_last(lam, theta, R, d, ell):
    x = x_minus(lam, theta, R, d, ell)
    c_last = _levels(lam, theta, R, d, ell)[..., -1]
    x[..., -1] = theta / psi_inv_upper(c_last)
    return x


def h_plus(lam, theta, R, d, ell):
    return np.sum(_weights(R, ell) * _x_plus_last(lam, theta, R, d, ell), axis=-1)


def _embed(xs, K):
    out = np.zeros(K)
    out[: xs.size] = xs
    return out


def _unit(K):
    e = np.zeros(K)
    e[0] = 1.0
    return e


def _solution(x, d, theta, lam=None) -> SplitSolution:
    x = np.asarray(x, dtype=float)
    return SplitSolution(
        split=x,
        objective=objective_G(x, d, theta),
        ell=int(np.count_nonzero(x > 0.0)),
        lam=lam,
    )


def _best(cands):
    # highest objective; ties go to fewer layers, then to the larger x_1
    return max(cands, key=lambda s: (s.objective, -s.ell, s.split[0]))


def _solve_minus(theta, R, d, ell, lam_tol):
    lam_min, lam_max = lambda_range(theta, R, d, ell)
    lam = bisect_decreasing(
        lambda t: float(h_minus(t, theta, R, d, ell)), lam_min, lam_max, xtol=lam_tol
    )
    return lam, _embed(x_minus(lam, theta, R, d, ell), len(d))


def _bracketed(theta, R, d, ell):
    lam_min, lam_max = lambda_range(theta, R, d, ell)
    if lam_min > lam_max:
        return False
    return float(h_minus(lam_min, theta, R, d, ell)) >= 1.0 >= float(
        h_minus(lam_max, theta, R, d, ell)
    )


def local_candidates(theta, R, d, lam_tol=0.0):
    """Principal-branch candidates x^(ell) for every feasible layer count.

    Returns a list of SplitSolution in increasing ell, starting with the
    single-layer point. Empty beyond that when the single-layer test fires.
    """
    d = importance_vector(d)
    K = d.size
    cands = [_solution(_unit(K), d, theta)]
    if K == 1 or theta > single_layer_threshold(R, d):
        return cands
    for ell in range(2, ell_pds(theta, R, d) + 1):
        if _bracketed(theta, R, d, ell):
            lam, x = _solve_minus(theta, R, d, ell, lam_tol)
            cands.append(_solution(x, d, theta, lam))
    return cands


def algorithm2_local(theta, R, d, lam_tol=0.0) -> SplitSolution:
    """Strict local maximiser of G from principal-branch candidates only.

    ``lam_tol`` loosens the multiplier bisection (0 runs to float resolution).
    """
    return _best(local_candidates(theta, R, d, lam_tol))


def algorithm1_global(theta, R, d, scan_points=SCAN_POINTS, lam_tol=0.0) -> SplitSolution:
    """Global maximiser of G: principal-branch candidates plus every root of
    the mixed-branch constraint H^+(lambda) = 1 found by a grid scan."""
    d = importance_vector(d)
    K = d.size
    cands = [_solution(_unit(K), d, theta)]
    if K == 1 or theta > single_layer_threshold(R, d):
        return cands[0]
    for ell in range(2, ell_pds(theta, R, d) + 1):
        lam_min, lam_max = lambda_range(theta, R, d, ell)
        if lam_min > lam_max:
            continue
        if _bracketed(theta, R, d, ell):
            lam, x = _solve_minus(theta, R, d, ell, lam_tol)
            cands.append(_solution(x, d, theta, lam))
        if float(h_minus(lam_min, theta, R, d, ell)) >= 1.0:
            roots = scan_roots(
                lambda t: h_plus(t, theta, R, d, ell),
                lam_min,
                lam_max,
                points=scan_points,
                xtol=lam_tol,
            )
            for lam in roots:
                x = _embed(_x_plus_last(lam, theta, R, d, ell), K)
                cands.append(_solution(x, d, theta, lam))
    return _best(cands)


def solve_k2(theta, R, d1, d2):
    """Closed-form optimum for two layers.

    Returns (alpha_star, objective) where alpha_star is the power fraction of
    the first layer and the objective is G at M_B(alpha_star, 1 - alpha_star).
    """
    if not d1 > d2 > 0:
        raise ValueError("need d1 > d2 > 0")
    t2 = 2.0**R
    d = np.array([d1, d2])

    def value(alpha):
        return objective_G(mb_forward([alpha, 1.0 - alpha], R), d, theta)

    if theta >= t2**-0.5:
        return 1.0, value(1.0)
    s = math.sqrt(1.0 - t2 * theta**2)
    xi = (theta * 2.0 ** (R / 2.0) / (1.0 + s)) ** 2 * math.exp(theta * (t2 - 1.0) + 2.0 * s)
    if d2 / d1 <= xi:
        return 1.0, value(1.0)
    q_lo = 1.0 / theta - math.sqrt(1.0 / theta**2 - t2)
    q_hi = 1.0 / theta + math.sqrt(1.0 / theta**2 - t2)

    def lhs(q):
        return t2 / q**2 * math.exp(theta * (q + t2 - 1.0 - t2 / q))

    q0 = bisect_decreasing(lhs, q_lo, q_hi, target=d2 / d1, ftol=0.0)
    if math.exp(-theta * t2 / q0) * (1.0 + t2 / q0**2) > 1.0:
        alpha = (q0 + t2 - 1.0) / (q0 + t2)
    else:
        alpha = 1.0
    return alpha, value(alpha)
