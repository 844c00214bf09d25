"""Brute-force validators that share no code path with the solvers.

The asymptotic objectives are maximised by exhaustive search over a
lattice on the simplex followed by a few rounds of local refinement at
half the previous step. Expectations over the fading gain are checked by
plain Monte Carlo.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

__all__ = [
    "BudgetExceeded",
    "GridSpec",
    "default_grid",
    "simplex_lattice",
    "grid_max_G",
    "grid_max_T",
    "mc_expectation",
]

DEFAULT_BUDGET = 10_000_000
_DEFAULT_RES = {1: 1, 2: 400, 3: 100, 4: 40}
_BOX = 4


class BudgetExceeded(RuntimeError):
    """The requested grid has more points than the configured budget."""


@dataclass(frozen=True)
class GridSpec:
    resolution: int
    refine_rounds: int = 3
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.resolution < 1 or self.refine_rounds < 0:
            raise ValueError("resolution must be positive and refine_rounds nonnegative")


def default_grid(K: int) -> GridSpec:
    return GridSpec(_DEFAULT_RES.get(K, 20))


def simplex_lattice(K: int, res: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All points of the simplex with coordinates in (1/res) Z, in
    lexicographic order of their integer numerators."""
    size = comb(res + K - 1, K - 1)
    if size > budget:
        raise BudgetExceeded(f"grid of {size} points exceeds budget {budget}")
    if K == 1:
        return np.ones((1, 1))
    # stars and bars: K-1 bar positions among res + K - 1 slots
    bars = np.array(list(itertools.combinations(range(res + K - 1), K - 1)))
    ext = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), res + K - 1)])
    return (np.diff(ext, axis=1) - 1) / res


def _offsets(K):
    steps = np.arange(-_BOX, _BOX + 1)
    return np.array(list(itertools.product(steps, repeat=K - 1)), dtype=float)


def _search(value, K, grid: GridSpec):
    pts = simplex_lattice(K, grid.resolution, grid.budget)
    vals = value(pts)
    k = int(np.argmax(vals))
    best, best_val = pts[k], float(vals[k])
    history = [best_val]
    step = 1.0 / grid.resolution
    offs = _offsets(K) if K > 1 else np.zeros((1, 0))
    for _ in range(grid.refine_rounds):
        step /= 2.0
        head = best[:-1] + step * offs
        tail = 1.0 - head.sum(axis=1, keepdims=True)
        cand = np.hstack([head, tail])
        cand = cand[np.all(cand >= -1e-15, axis=1)]
        cand = np.vstack([best[None, :], np.maximum(cand, 0.0)])
        vals = value(cand)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best, best_val = cand[k], float(vals[k])
        history.append(best_val)
    return best, best_val, history


def _g(x, d, theta):
    with np.errstate(divide="ignore"):
        return np.where(x > 0.0, np.exp(-theta / np.where(x > 0.0, x, 1.0)), 0.0) @ d


def _t(v, d, R, theta):
    with np.errstate(divide="ignore", over="ignore"):
        expo = (2.0 ** (R / np.where(v > 0.0, v, 1.0)) - 1.0) * theta / (2.0**R - 1.0)
        return np.where(v > 0.0, np.exp(-expo), 0.0) @ d


def grid_max_G(theta, R, d, grid: GridSpec | None = None, history=False):
    """Maximise sum_i d_i exp(-theta / x_i) over {x >= 0 : sum 2^{R(i-1)} x_i = 1}
    by searching z_i = 2^{R(i-1)} x_i on the standard simplex. Returns (x, value)."""
    d = np.asarray(d, dtype=float)
    K = d.size
    scale = 2.0 ** (R * np.arange(K))
    grid = grid or default_grid(K)
    z, val, hist = _search(lambda z: _g(z / scale, d, theta), K, grid)
    out = (z / scale, val)
    return out + (hist,) if history else out


def grid_max_T(theta, R, d, grid: GridSpec | None = None, history=False):
    """Maximise sum_i d_i t(v_i) over the standard simplex. Returns (v, value)."""
    d = np.asarray(d, dtype=float)
    grid = grid or default_grid(d.size)
    v, val, hist = _search(lambda v: _t(v, d, R, theta), d.size, grid)
    out = (v, val)
    return out + (hist,) if history else out


def mc_expectation(f, sigma2, samples: int, seed: int):
    """Sample mean and standard error of f(gamma), gamma = -sigma2 ln U."""
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    rng = np.random.default_rng(seed)
    gamma = -sigma2 * np.log1p(-rng.random(samples))
    vals = np.asarray(f(gamma), dtype=float)
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(samples))
