import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uepfading.bounds import LOG2E, capacity, err_bound, err_exp, err_nor, exp_exponent, v_tot

# 40-digit mpmath: max over lambda of lambda ln(1 + 3/(1+lambda)) - lambda ln 2
EXPONENT_RHO3_R1 = 0.23024814353079678
# Phi(log2(n) / (2 sqrt(n) sqrt(V_tot(3)))) + 2/sqrt(n) at n = 1e4
NOR_AT_CAPACITY = 0.53499711746801832


def test_capacity_and_variance():
    assert capacity(0.0) == 0.0
    assert capacity(1.0) == 1.0
    assert capacity(3.0) == 2.0
    assert v_tot(0.0) == 0.0
    assert v_tot(1.0) == pytest.approx(LOG2E**2)
    assert v_tot(1e6) == pytest.approx(2.0 * LOG2E**2, rel=1e-5)


def test_exponent_matches_reference():
    assert exp_exponent(1.0, 3.0) == pytest.approx(EXPONENT_RHO3_R1, abs=1e-12)


def test_exponent_matches_dense_grid():
    lam = np.linspace(0.0, 1.0, 100001)
    for R, rho in [(1.0, 3.0), (0.2, 0.5), (1.9, 3.0), (0.05, 10.0)]:
        grid = np.max(lam * (np.log1p(rho / (1 + lam)) - R * math.log(2)))
        assert exp_exponent(R, rho) == pytest.approx(max(grid, 0.0), abs=1e-8)


def test_err_exp_above_capacity_is_one():
    assert err_exp(100, 1.5, 1.0) == 1.0


def test_err_exp_in_unit_interval_and_decreasing():
    vals = [err_exp(n, 1.0, 3.0) for n in (100, 1000, 3000)]
    assert all(0.0 < v < 1.0 for v in vals)
    assert vals[0] > vals[1] > vals[2]
    # n * exponent ~ 2302 underflows to exactly zero
    assert err_exp(10000, 1.0, 3.0) == 0.0


def test_err_nor_examples():
    for n in (1, 2, 4):
        assert err_nor(n, 0.5, 3.0) == 1.0
    assert err_nor(1e6, 1.0, 3.0) == pytest.approx(0.002, abs=1e-6)
    assert err_nor(1e4, 2.0, 3.0) == pytest.approx(NOR_AT_CAPACITY, abs=1e-12)


def test_err_bound_conventions():
    assert err_bound(0, 1.0, 3.0) == 1.0
    assert err_bound(100, 1.0, 0.0) == 1.0
    assert err_bound(0, 0.1, 0.0) == 1.0
    out = err_bound(np.array([0.0, 100.0]), 1.0, np.array([3.0, 0.0]))
    assert np.all(out == 1.0)


def test_err_bound_decreasing_below_capacity():
    R = 0.8 * capacity(3.0)
    vals = [err_bound(n, R, 3.0) for n in (1e2, 1e3, 1e4, 1e5)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_limits():
    C = capacity(3.0)
    ns = np.unique(np.round(np.geomspace(10, 1e6, 300)))
    assert np.min(err_bound(ns, 0.8 * C, 3.0)) <= 0.01
    assert np.all(err_bound(ns[ns >= 1e4], 1.2 * C, 3.0) >= 0.99)


def test_crossover():
    C = capacity(3.0)
    f = np.linspace(0.005, 1.0, 400)
    e, n = err_exp(1e4, f * C, 3.0), err_nor(1e4, f * C, 3.0)
    exp_tighter = e < n
    k = int(np.argmin(exp_tighter))
    assert 0 < k < f.size
    assert exp_tighter[:k].all() and (n[k:] < e[k:]).all()


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=1, max_value=1e6),
    st.floats(min_value=0.01, max_value=4.0),
    st.floats(min_value=1e-3, max_value=100.0),
)
def test_bound_is_min(n, R, rho):
    b = err_bound(n, R, rho)
    assert 0.0 <= b <= 1.0
    assert b <= err_nor(n, R, rho) and b <= err_exp(n, R, rho)
    assert b == min(err_nor(n, R, rho), err_exp(n, R, rho))


@settings(max_examples=100, deadline=None)
@given(
    st.floats(min_value=10, max_value=1e5),
    st.floats(min_value=0.05, max_value=3.0),
    st.floats(min_value=0.01, max_value=20.0),
)
def test_bound_monotone(n, R, rho):
    rhos = rho * np.array([1.0, 1.1, 1.5, 2.0])
    assert np.all(np.diff(err_bound(n, R, rhos)) <= 1e-15)
    Rs = R * np.array([1.0, 1.1, 1.5, 2.0])
    assert np.all(np.diff(err_bound(n, Rs, rho)) >= -1e-15)
