"""Cross-check suites behind ``uepfading validate``.

Each suite returns a SuiteResult; ``run_all`` runs them in a fixed order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import fbl, ora, oracle, pds
from .bounds import capacity, err_bound, err_exp, err_nor
from .params import PRESETS, ChannelParams
from .special import (
    BRANCH_POINT,
    PSI_MAX,
    lambert_w0,
    lambert_wm1,
    psi,
    psi_inv_lower,
    psi_inv_upper,
)

__all__ = [
    "SuiteResult",
    "pds_structure_errors",
    "ora_structure_errors",
    "random_importance",
    "run_all",
    "SUITES",
]


@dataclass
class SuiteResult:
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0


def random_importance(rng, K, gap=1e-3):
    """Strictly decreasing weights summing to one, neighbours at least ``gap`` apart."""
    while True:
        d = np.sort(rng.dirichlet(np.ones(K)))[::-1]
        if K == 1 or np.all(-np.diff(d) > gap):
            return d


def pds_structure_errors(sol, theta, R, d):
    """Largest violations of the optimality structure for a power split:
    returns (feasibility, kkt) residuals, raising AssertionError on any
    ordering or support defect."""
    x = sol.split
    ell = sol.ell
    assert x[0] > 0.0, "x_1 must be positive"
    assert np.all(x[ell:] == 0.0) and np.all(x[:ell] > 0.0), "support is not a prefix"
    assert np.all(np.diff(x[:ell]) < 0.0), "prefix is not strictly decreasing"
    assert ell <= pds.ell_pds(theta, R, d), "more layers than the layer bound"
    w = 2.0 ** (R * np.arange(x.size))
    feas = abs(float(w @ x) - 1.0)
    kkt = 0.0
    if ell >= 2:
        xs = x[:ell]
        grad = theta / xs**2 * np.exp(-theta / xs) * d[:ell]
        kkt = float(np.max(np.abs(-grad + sol.lam * w[:ell])))
    return feas, kkt


def ora_structure_errors(sol, theta, R, d):
    """Same as pds_structure_errors for a time split."""
    v = sol.split
    ell = sol.ell
    assert v[0] > 0.0, "v_1 must be positive"
    assert np.all(v[ell:] == 0.0) and np.all(v[:ell] > 0.0), "support is not a prefix"
    assert np.all(np.diff(v[:ell]) < 0.0), "prefix is not strictly decreasing"
    assert ell <= ora.ell_ora(theta, R, d), "more blocks than the block bound"
    feas = abs(float(v.sum()) - 1.0)
    kkt = 0.0
    if ell >= 2:
        kkt = float(np.max(np.abs(-ora.t_prime(v[:ell], R, theta) * d[:ell] + sol.lam)))
    return feas, kkt


def _sweep(quick):
    return np.arange(0.01, 1.0, 0.05 if quick else 0.01)


def suite_kernels(quick=False, **_):
    rng = np.random.default_rng(11)
    x = BRANCH_POINT + (0.0 - BRANCH_POINT) * rng.random(1000)
    x = x[x < 0.0]
    worst_w = 0.0
    for w in (lambert_w0(x), lambert_wm1(x)):
        worst_w = max(worst_w, float(np.max(np.abs(w * np.exp(w) - x) / np.abs(x))))
    c = PSI_MAX * rng.random(1000) + 1e-300
    worst_p = max(
        float(np.max(np.abs(psi(psi_inv_lower(c)) / c - 1.0))),
        float(np.max(np.abs(psi(psi_inv_upper(c)) / c - 1.0))),
    )
    ok = worst_w <= 1e-12 and worst_p <= 1e-10
    return ok, f"lambert residual {worst_w:.2e}, psi round trip {worst_p:.2e}"


def suite_bounds(quick=False, **_):
    rho = 3.0
    cap = capacity(rho)
    f = np.linspace(0.01, 1.0, 200)
    e_exp = err_exp(1e4, f * cap, rho)
    e_nor = err_nor(1e4, f * cap, rho)
    exp_wins = e_exp < e_nor
    # crossover: exp tighter on a low-rate prefix, nor tighter on the rest
    k = int(np.argmin(exp_wins)) if not exp_wins.all() else f.size
    crossover = 0 < k < f.size and exp_wins[:k].all() and not exp_wins[k:].any()
    ns = np.unique(np.round(np.geomspace(10, 1e6, 200)))
    low = float(np.min(err_bound(ns, 0.8 * cap, rho)))
    high = float(np.min(err_bound(ns[ns >= 1e4], 1.2 * cap, rho)))
    ok = crossover and low <= 0.01 and high >= 0.99
    return ok, f"crossover at f={f[min(k, f.size - 1)]:.3f}, min E(0.8C)={low:.2e}, min E(1.2C)={high:.4f}"


def suite_k2_closed_form(quick=False, budget=oracle.DEFAULT_BUDGET, **_):
    rng = np.random.default_rng(12)
    worst_cf = worst_or = 0.0
    for _ in range(10 if quick else 50):
        R, th = rng.uniform(0.05, 1.5), rng.uniform(0.005, 1.2)
        d = random_importance(rng, 2)
        _, obj = pds.solve_k2(th, R, d[0], d[1])
        sol = pds.algorithm2_local(th, R, d)
        _, g = oracle.grid_max_G(th, R, d, oracle.GridSpec(400, 3, budget))
        worst_cf = max(worst_cf, abs(obj - sol.objective))
        worst_or = max(worst_or, abs(obj - g), abs(sol.objective - g))
    ok = worst_cf <= 1e-9 and worst_or <= 1e-4
    return ok, f"closed form vs solver {worst_cf:.2e}, vs grid {worst_or:.2e}"


def suite_oracle_k3(quick=False, budget=oracle.DEFAULT_BUDGET, **_):
    rng = np.random.default_rng(13)
    gap_g = gap_t = -math.inf
    for _ in range(5 if quick else 20):
        R, th = rng.uniform(0.05, 1.0), rng.uniform(0.005, 1.0)
        d = random_importance(rng, 3)
        grid = oracle.GridSpec(100, 3, budget)
        gap_g = max(gap_g, oracle.grid_max_G(th, R, d, grid)[1] - pds.algorithm1_global(th, R, d).objective)
        gap_t = max(gap_t, oracle.grid_max_T(th, R, d, grid)[1] - ora.algorithm3_global(th, R, d).objective)
    ok = gap_g <= 1e-4 and gap_t <= 1e-4
    return ok, f"grid minus solver: power {gap_g:.2e}, time {gap_t:.2e}"


def suite_algorithm_agreement(quick=False, **_):
    R = 0.1
    worst_p = worst_o = 0.0
    for name in ("fig2",) if quick else ("fig2", "fig3"):
        d = PRESETS[name]
        for th in _sweep(quick):
            worst_p = max(worst_p, abs(pds.algorithm1_global(th, R, d).objective - pds.algorithm2_local(th, R, d).objective))
            worst_o = max(worst_o, abs(ora.algorithm3_global(th, R, d).objective - ora.algorithm4_local(th, R, d).objective))
    ok = worst_p <= 1e-9 and worst_o <= 1e-9
    return ok, f"global vs local: power {worst_p:.2e}, time {worst_o:.2e}"


def suite_kkt(quick=False, lam_tol=0.0, **_):
    R = 0.1
    feas = kkt = 0.0
    try:
        for name in ("fig2", "fig3"):
            d = PRESETS[name]
            for th in _sweep(quick):
                for s, check in (
                    (pds.algorithm2_local(th, R, d, lam_tol=lam_tol), pds_structure_errors),
                    (ora.algorithm4_local(th, R, d, lam_tol=lam_tol), ora_structure_errors),
                ):
                    f, k = check(s, th, R, d)
                    feas, kkt = max(feas, f), max(kkt, k)
    except AssertionError as exc:
        return False, f"structure violated: {exc}"
    ok = feas <= 1e-10 and kkt <= 1e-8
    return ok, f"constraint residual {feas:.2e}, stationarity residual {kkt:.2e}"


def suite_quadrature(quick=False, **_):
    rng = np.random.default_rng(14)
    mc = fbl.QuadratureSpec("mc", 200_000 if quick else 1_000_000, 7)
    worst = 0.0
    for _ in range(3 if quick else 10):
        K = int(rng.integers(1, 4))
        R, th = rng.uniform(0.05, 0.5), rng.uniform(0.02, 1.0)
        n = int(rng.choice([500, 1000, 5000]))
        d = random_importance(rng, K)
        ch = ChannelParams.from_theta(R, th)
        alpha = pds.mb_inverse(pds.algorithm2_local(th, R, d).split, R)
        w = fbl.m_i_round(ora.algorithm4_local(th, R, d).split, n)
        worst = max(
            worst,
            abs(fbl.g_n(alpha, d, n, ch) - fbl.g_n(alpha, d, n, ch, mc)),
            abs(fbl.t_n(w, d, n, ch) - fbl.t_n(w, d, n, ch, mc)),
        )
    return worst <= 5e-3, f"panel quadrature vs Monte Carlo {worst:.2e}"


SUITES = {
    "kernels": suite_kernels,
    "error-bounds": suite_bounds,
    "k2-closed-form": suite_k2_closed_form,
    "oracle-k3": suite_oracle_k3,
    "algorithm-agreement": suite_algorithm_agreement,
    "kkt": suite_kkt,
    "quadrature": suite_quadrature,
}


def run_all(quick=False, lam_tol=0.0, only=None, budget=oracle.DEFAULT_BUDGET):
    out = []
    for name, fn in SUITES.items():
        if only and name not in only:
            continue
        t = time.perf_counter()
        ok, detail = fn(quick=quick, lam_tol=lam_tol, budget=budget)
        out.append(SuiteResult(name, bool(ok), detail, time.perf_counter() - t))
    return out
