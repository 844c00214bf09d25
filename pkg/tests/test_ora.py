import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uepfading import ora, oracle
from uepfading.params import PRESETS
from uepfading.special import DomainError
from uepfading.validation import ora_structure_errors, random_importance

FIG3 = PRESETS["fig3"]
# 30-digit mpmath root of N(v) = 0 and U there, R = theta = 0.1
PEAK_V = 0.08008451715774469
PEAK_M = 54.45566923796471


def test_t_and_objective():
    assert ora.t_scalar(0.0, 0.1, 0.3) == 0.0
    assert ora.t_scalar(1.0, 0.1, 0.3) == pytest.approx(math.exp(-0.3))
    assert ora.t_scalar(0.5, 1.0, 0.2) == pytest.approx(math.exp(-0.6))
    assert ora.t_scalar(1e-4, 0.5, 0.2) == 0.0
    d = np.array([0.7, 0.3])
    assert ora.objective_T([1, 0], d, 0.1, 0.4) == pytest.approx(0.7 * math.exp(-0.4))
    assert ora.objective_T([0.5, 0.5], d, 1.0, 0.1) == pytest.approx(math.exp(-0.3))
    with pytest.raises(ValueError):
        ora.objective_T([1.0], d, 1.0, 0.1)


def test_theta_c():
    assert ora.theta_c(1.0) == pytest.approx(0.5 * (2 / math.log(2) + 1), rel=1e-15)
    assert ora.theta_c(1.0) == pytest.approx(1.9426950408889634, rel=1e-15)
    # smooth as R -> 0 (limit is 2)
    assert abs(ora.theta_c(1e-6) - ora.theta_c(1e-5)) < 1e-4
    assert ora.theta_c(1e-6) == pytest.approx(2.0, abs=1e-5)


def test_u_values():
    assert ora.u_fn(0.0, 0.1, 0.1) == 0.0
    assert ora.u_fn(1.0, 0.3, 0.2) == pytest.approx(2**0.3 * math.exp(-0.2))


def test_u_unimodal_on_grid():
    v = np.linspace(1e-4, 1.0, 10000)
    u = ora.u_fn(v, 0.5, 0.2)
    s = np.sign(np.diff(u))
    s = s[s != 0]
    assert np.count_nonzero(np.diff(s) != 0) == 1


def test_peak():
    pk = ora.u_peak(0.1, 0.1)
    assert pk.v_int == pytest.approx(PEAK_V, rel=1e-12)
    assert pk.m_int == pytest.approx(PEAK_M, rel=1e-10)
    assert abs(ora._n_fn(pk.v_int, 0.1, 0.1)) <= 1e-12
    pk = ora.u_peak(0.5, 0.2)
    assert pk.m_int >= np.max(ora.u_fn(np.linspace(0, 1, 10000), 0.5, 0.2))
    assert ora.u_peak(0.3, 0.999 * ora.theta_c(0.3)).v_int > 0.99
    with pytest.raises(DomainError):
        ora.u_peak(0.3, ora.theta_c(0.3))


def test_level_inverses():
    R, th = 0.2, 0.15
    pk = ora.u_peak(R, th)
    lo = 2**R * math.exp(-th)
    assert ora.v_plus(lo, R, th) == pytest.approx(1.0, abs=1e-12)
    assert ora.v_plus(pk.m_int, R, th) == pytest.approx(pk.v_int, abs=1e-7)
    assert ora.v_minus(pk.m_int, R, th) == pytest.approx(pk.v_int, abs=1e-7)
    C = np.geomspace(lo, pk.m_int, 500)
    vp, vm = ora.v_plus(C, R, th), ora.v_minus(C, R, th)
    assert np.all(vm <= vp)
    assert np.max(np.abs(ora.u_fn(vp, R, th) / C - 1)) <= 1e-10
    assert np.max(np.abs(ora.u_fn(vm, R, th) / C - 1)) <= 1e-10
    with pytest.raises(DomainError):
        ora.v_plus(lo * 0.9, R, th)
    with pytest.raises(DomainError):
        ora.v_minus(pk.m_int * 1.1, R, th)


def test_ell_ora():
    assert ora.ell_ora(2.5, 0.1, FIG3) == 1
    th, R = 0.05, 0.1
    pk = ora.u_peak(R, th)
    cut = 2**R * math.exp(-th) / pk.m_int * FIG3[0]
    assert ora.ell_ora(th, R, FIG3) == max(i + 1 for i in range(8) if FIG3[i] >= cut)
    d = np.array([0.99, 0.01])
    pk = ora.u_peak(0.1, 0.9)
    assert d[1] < 2**0.1 * math.exp(-0.9) / pk.m_int * d[0]
    assert ora.ell_ora(0.9, 0.1, d) == 1


def test_early_exit_past_theta_c():
    for R in (0.1, 0.7):
        for solve in (ora.algorithm3_global, ora.algorithm4_local):
            s = solve(ora.theta_c(R) + 0.01, R, FIG3)
            assert s.split[0] == 1.0 and s.ell == 1 and s.lam is None


def test_k3_against_oracle():
    d = np.array([0.5, 0.3, 0.2])
    s = ora.algorithm3_global(0.1, 0.1, d)
    _, t = oracle.grid_max_T(0.1, 0.1, d)
    assert s.objective >= t - 1e-4


def test_s_plus_nonincreasing():
    R, th = 0.1, 0.1
    pk = ora.u_peak(R, th)
    for ell in range(2, 6):
        lo, hi = ora.lambda_range(th, R, FIG3, ell, pk)
        s = ora.s_plus(np.linspace(lo, hi, 400), th, R, FIG3, ell, pk)
        assert np.all(np.diff(s) <= 1e-13)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.floats(0.02, 1.5), st.floats(0.002, 2.0), st.integers(0, 2**31))
def test_structure_and_kkt(K, R, th, seed):
    d = random_importance(np.random.default_rng(seed), K)
    for solve in (ora.algorithm3_global, ora.algorithm4_local):
        s = solve(th, R, d)
        feas, kkt = ora_structure_errors(s, th, R, d)
        assert feas <= 1e-10
        if solve is ora.algorithm4_local:
            assert kkt <= 1e-8
            if s.ell >= 2:
                pk = ora.u_peak(R, th)
                assert abs(ora.s_plus(s.lam, th, R, d, s.ell, pk) - 1) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.floats(0.02, 1.5), st.floats(0.002, 2.0), st.integers(0, 2**31))
def test_local_optimality(K, R, th, seed):
    d = random_importance(np.random.default_rng(seed), K)
    s = ora.algorithm4_local(th, R, d)
    rng = np.random.default_rng(seed)
    for _ in range(50):
        delta = rng.standard_normal(K)
        delta[s.ell:] = np.abs(delta[s.ell:])
        delta[0] -= delta.sum()
        delta *= 1e-4 / np.linalg.norm(delta)
        v = s.split + delta
        if np.any(v < 0):
            continue
        assert ora.objective_T(v, d, R, th) <= s.objective + 1e-10


def test_algorithms_agree_on_small_sweep():
    for th in np.arange(0.02, 1.0, 0.08):
        a = ora.algorithm3_global(th, 0.1, FIG3).objective
        b = ora.algorithm4_local(th, 0.1, FIG3).objective
        assert abs(a - b) <= 1e-9


def test_single_block():
    s = ora.algorithm4_local(0.3, 0.1, [1.0])
    assert np.array_equal(s.split, [1.0])
