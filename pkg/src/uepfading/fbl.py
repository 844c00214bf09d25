"""Finite-blocklength objectives G_n (superposition) and T_n (time sharing).

Both are expectations over the channel power gain gamma ~ Exp(mean sigma2)
of products of per-block success probabilities 1 - E(n, R, rho). The
integrands are close to step functions once n is in the thousands, so the
default quadrature places composite Gauss-Legendre panels densely around
the asymptotic outage thresholds. Gauss-Laguerre and Monte Carlo remain
available for cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_laguerre

from . import ora, pds
from .bounds import err_bound
from .params import ChannelParams, importance_vector

__all__ = [
    "QuadratureSpec",
    "parse_quad",
    "DEFAULT_QUAD",
    "quad_nodes",
    "exp_expectation",
    "g_n",
    "t_n",
    "m_i_round",
    "heuristic_x_inits",
    "heuristic_v_inits",
    "n5",
    "n6",
]

# e^-45 ~ 3e-20, far below anything the objectives resolve
_U_MAX = 45.0
_BASE_PANELS = 48
_REFINE = (0.0025, 0.005, 0.01, 0.02, 0.04, 0.08, 0.16, 0.32)


@dataclass(frozen=True)
class QuadratureSpec:
    """How E over gamma is computed.

    scheme "panel": composite Gauss-Legendre, ``order`` nodes per panel,
    refined around the supplied breakpoints. "gl": Gauss-Laguerre of the
    given order. "mc": Monte Carlo with ``order`` samples and ``seed``.
    """

    scheme: str = "panel"
    order: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.scheme not in ("panel", "gl", "mc"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.order < 1:
            raise ValueError("quadrature order must be at least 1")

    def __str__(self):
        if self.scheme == "mc":
            return f"mc:{self.order}:{self.seed}"
        return f"{self.scheme}:{self.order}"


DEFAULT_QUAD = QuadratureSpec()


def parse_quad(text: str) -> QuadratureSpec:
    """'panel', 'panel:ORDER', 'gl:ORDER' or 'mc:SAMPLES:SEED'."""
    parts = text.strip().split(":")
    try:
        if parts[0] == "panel" and len(parts) <= 2:
            return QuadratureSpec("panel", int(parts[1]) if len(parts) == 2 else 8)
        if parts[0] == "gl" and len(parts) == 2:
            return QuadratureSpec("gl", int(parts[1]))
        if parts[0] == "mc" and len(parts) == 3:
            return QuadratureSpec("mc", int(parts[1]), int(parts[2]))
    except ValueError:
        pass
    raise ValueError(f"bad quadrature spec {text!r}; want panel[:N], gl:N or mc:N:SEED")


@lru_cache(maxsize=None)
def _laguerre(order):
    u, w = roots_laguerre(order)
    return u, w


@lru_cache(maxsize=None)
def _legendre(order):
    return np.polynomial.legendre.leggauss(order)


def _panel_edges(breaks_u):
    # equal-probability panels for the bulk, unit-width panels for the tail
    p = np.linspace(0.0, 1.0, _BASE_PANELS + 1)[:-1]
    edges = [-np.log1p(-p), np.arange(0.0, _U_MAX + 1.0)]
    s = np.array(_REFINE)
    for b in breaks_u:
        if 0.0 < b < _U_MAX:
            edges.append(b * np.concatenate([1.0 - s, [1.0], 1.0 + s]))
    e = np.unique(np.clip(np.concatenate(edges), 0.0, _U_MAX))
    return e[np.diff(e, prepend=-1.0) > 1e-14 * max(1.0, e[-1])]


def quad_nodes(spec: QuadratureSpec, breaks_u=()):
    """Nodes u and weights w with sum_k w_k f(u_k) ~ int_0^inf e^-u f(u) du.

    Monte Carlo draws u = -ln U from a counter-based stream, so the sample
    set depends only on the seed.
    """
    if spec.scheme == "gl":
        return _laguerre(spec.order)
    if spec.scheme == "mc":
        rng = np.random.Generator(np.random.Philox(spec.seed))
        u = -np.log1p(-rng.random(spec.order))
        return u, np.full(spec.order, 1.0 / spec.order)
    t, wt = _legendre(spec.order)
    e = _panel_edges(breaks_u)
    a, b = e[:-1, None], e[1:, None]
    u = 0.5 * (b - a) * t + 0.5 * (b + a)
    w = 0.5 * (b - a) * wt * np.exp(-u)
    return u.ravel(), w.ravel()


def exp_expectation(f, sigma2, spec: QuadratureSpec = DEFAULT_QUAD, breakpoints=()):
    """E[f(gamma)] for gamma ~ Exp(mean sigma2).

    ``f`` maps an array of gammas to an array of values. ``breakpoints`` are
    gamma values where f changes quickly (used by the panel scheme only).
    """
    u, w = quad_nodes(spec, tuple(float(b) / sigma2 for b in breakpoints))
    return float(np.dot(w, np.asarray(f(sigma2 * u), dtype=float)))


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"blocklength must be a positive integer, got {n!r}")
    return int(n)


def g_n(alpha, d, n, ch: ChannelParams, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Superposition objective sum_i d_i E[prod_{j<=i} (1 - E(n, R, SINR_j))]."""
    n = _check_n(n)
    alpha = np.asarray(alpha, dtype=float)
    d = np.asarray(d, dtype=float)
    if alpha.shape != d.shape:
        raise ValueError("alpha and d differ in length")
    if np.any(alpha < -1e-12) or abs(alpha.sum() - 1.0) > 1e-10:
        raise ValueError("alpha is not on the probability simplex")
    alpha = np.maximum(alpha, 0.0)
    beta = np.concatenate([np.cumsum(alpha[::-1])[::-1][1:], [0.0]])
    R, P = ch.R, ch.P
    x = alpha - (2.0**R - 1.0) * beta
    breaks = [(2.0**R - 1.0) / (P * xj) for xj in x if xj > 0.0]

    def integrand(gamma):
        ok = np.ones_like(gamma)
        total = np.zeros_like(gamma)
        for j in range(alpha.size):
            if alpha[j] == 0.0:
                break
            sinr = gamma * alpha[j] * P / (1.0 + gamma * P * beta[j])
            ok = ok * (1.0 - err_bound(n, R, sinr))
            total = total + d[j] * ok
        return total

    return exp_expectation(integrand, ch.sigma2, spec, breaks)


def _counts(w, n):
    m = np.rint(np.asarray(w, dtype=float) * n)
    if np.any(np.abs(np.asarray(w) * n - m) > 1e-9) or m.sum() != n or np.any(m < 0):
        raise ValueError("w is not a quantised split with w_i n integral and summing to n")
    return m.astype(np.int64)


def t_n(w, d, n, ch: ChannelParams, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Time-sharing objective sum_i d_i E[1 - E(w_i n, R / w_i, gamma P)]."""
    n = _check_n(n)
    d = np.asarray(d, dtype=float)
    m = _counts(w, n)
    if m.shape != d.shape:
        raise ValueError("w and d differ in length")
    R, P = ch.R, ch.P
    live = np.nonzero(m > 0)[0]
    rates = {int(i): R * n / int(m[i]) for i in live}
    breaks = [(2.0 ** rates[i] - 1.0) / P for i in rates if rates[i] < 1000.0]

    def integrand(gamma):
        total = np.zeros_like(gamma)
        for i, rate in rates.items():
            total = total + d[i] * (1.0 - err_bound(int(m[i]), rate, gamma * P))
        return total

    return exp_expectation(integrand, ch.sigma2, spec, breaks)


def m_i_round(v, n) -> np.ndarray:
    """Quantise v to multiples of 1/n: floor everything, then hand the r
    leftover units to the r largest fractional parts among v_i > 0 (ties to
    the smaller index)."""
    n = _check_n(n)
    v = np.asarray(v, dtype=float)
    scaled = v * n
    base = np.floor(scaled)
    r = n - int(base.sum())
    frac = np.where(v > 0.0, scaled - base, -1.0)
    order = np.lexsort((np.arange(v.size), -frac))
    if r < 0 or r > np.count_nonzero(v > 0.0):
        raise ValueError("v does not sum to one")
    base[order[:r]] += 1.0
    return base / n


def heuristic_x_inits(d, R):
    """x_bar_i(j) = d_j / (2^{R(j-1)} sum_{k<=i} d_k) for j <= i, one per i."""
    d = np.asarray(d, dtype=float)
    K = d.size
    out = []
    for i in range(1, K + 1):
        x = np.zeros(K)
        x[:i] = d[:i] / (d[:i].sum() * 2.0 ** (R * np.arange(i)))
        out.append(x)
    return out


def heuristic_v_inits(d):
    """v_bar_i(j) = d_j / sum_{k<=i} d_k for j <= i, one per i."""
    d = np.asarray(d, dtype=float)
    out = []
    for i in range(1, d.size + 1):
        v = np.zeros(d.size)
        v[:i] = d[:i] / d[:i].sum()
        out.append(v)
    return out


def n5(theta, R, d, n, P=1.0, spec: QuadratureSpec = DEFAULT_QUAD, lam_tol=0.0):
    """Best power split under G_n among the asymptotic local candidates and
    the heuristic splits. Returns (alpha, value)."""
    d = importance_vector(d)
    ch = ChannelParams.from_theta(R, theta, P)
    cands = [c.split for c in pds.local_candidates(theta, R, d, lam_tol)]
    cands += heuristic_x_inits(d, R)
    best = None
    for x in cands:
        alpha = pds.mb_inverse(x, R)
        val = g_n(alpha, d, n, ch, spec)
        if best is None or val > best[1]:
            best = (alpha, val)
    return best


def n6(theta, R, d, n, P=1.0, spec: QuadratureSpec = DEFAULT_QUAD, lam_tol=0.0):
    """Best quantised time split under T_n among the rounded asymptotic
    local candidates and heuristic splits. Returns (w, value)."""
    d = importance_vector(d)
    ch = ChannelParams.from_theta(R, theta, P)
    cands = [c.split for c in ora.local_candidates(theta, R, d, lam_tol)]
    cands += heuristic_v_inits(d)
    best = None
    for v in cands:
        w = m_i_round(v, n)
        val = t_n(w, d, n, ch, spec)
        if best is None or val > best[1]:
            best = (w, val)
    return best
