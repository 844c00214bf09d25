"""Bisection helpers shared by the solvers."""

import numpy as np


def bisect_decreasing(f, lo, hi, target=1.0, xtol=0.0, ftol=1e-13, max_iter=200):
    """Root of f(x) = target for f nonincreasing on [lo, hi].

    Iterates until |f - target| <= ftol, the bracket is narrower than xtol,
    or the bracket collapses to adjacent floats.
    """
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        val = f(mid)
        if abs(val - target) <= ftol:
            return mid
        if val > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= xtol:
            break
    return 0.5 * (lo + hi)


def scan_roots(f, lo, hi, target=1.0, points=2000, xtol=0.0, ftol=1e-13):
    """All roots of f(x) = target on [lo, hi] bracketed by a uniform grid.

    ``f`` must accept an array of abscissae. Each sign change of f - target
    between neighbouring grid points is refined by bisection.
    """
    grid = np.linspace(lo, hi, points)
    vals = np.asarray(f(grid), dtype=float) - target
    roots = [float(x) for x, v in zip(grid, vals) if v == 0.0]
    sign = np.sign(vals)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    for k in idx:
        a, b = grid[k], grid[k + 1]
        fa = vals[k]
        for _ in range(200):
            m = 0.5 * (a + b)
            if m <= a or m >= b or b - a <= xtol:
                break
            fm = float(np.asarray(f(np.array([m])))[0]) - target
            if abs(fm) <= ftol:
                a = b = m
                break
            if np.sign(fm) == np.sign(fa):
                a, fa = m, fm
            else:
                b = m
        roots.append(0.5 * (a + b))
    return sorted(roots)

