import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uepfading.special import (
    BRANCH_POINT,
    PSI_MAX,
    DomainError,
    lambert_w0,
    lambert_wm1,
    psi,
    psi_inv_lower,
    psi_inv_upper,
    std_normal_cdf,
)

# reference values from 40-digit mpmath
W0_MINUS_01 = -0.11183255915896297
W0_MINUS_025 = -0.35740295618138890
WM1_MINUS_01 = -3.5771520639572971
PSI_LOW_03 = 0.82906898914842219
PSI_UP_03 = 3.9528428745753177
PHI_196 = 0.97500210485177957

branch_args = st.floats(min_value=BRANCH_POINT, max_value=-1e-300, allow_nan=False)
psi_levels = st.floats(min_value=1e-300, max_value=PSI_MAX, allow_nan=False)


def test_branch_point_values():
    assert lambert_w0(BRANCH_POINT) == -1.0
    assert lambert_wm1(BRANCH_POINT) == -1.0


def test_reference_values():
    assert lambert_w0(-0.1) == pytest.approx(W0_MINUS_01, rel=1e-14)
    assert lambert_w0(-0.25) == pytest.approx(W0_MINUS_025, rel=1e-14)
    assert lambert_wm1(-0.1) == pytest.approx(WM1_MINUS_01, rel=1e-14)
    assert lambert_wm1(-2.0 * math.exp(-2.0)) == pytest.approx(-2.0, rel=1e-14)


def test_domain_errors():
    for bad in (0.0, 0.1, -0.4, float("nan")):
        with pytest.raises(DomainError):
            lambert_w0(bad)
        with pytest.raises(DomainError):
            lambert_wm1(bad)
    for bad in (0.0, -1.0, PSI_MAX + 1e-6):
        with pytest.raises(DomainError):
            psi_inv_lower(bad)
        with pytest.raises(DomainError):
            psi_inv_upper(bad)


def test_rounding_past_branch_point_is_clamped():
    assert lambert_w0(BRANCH_POINT - 5e-15) == -1.0
    assert lambert_wm1(BRANCH_POINT - 5e-15) == -1.0


def test_psi_values():
    assert psi(2.0) == pytest.approx(4.0 * math.exp(-2.0), rel=1e-15)
    assert psi(1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert psi(math.inf) == 0.0
    assert psi(1e6) == 0.0


def test_psi_inverse_values():
    assert psi_inv_lower(PSI_MAX) == pytest.approx(2.0, abs=1e-7)
    assert psi_inv_upper(PSI_MAX) == pytest.approx(2.0, abs=1e-7)
    assert psi_inv_lower(math.exp(-1.0)) == pytest.approx(1.0, rel=1e-13)
    assert psi_inv_upper(25.0 * math.exp(-5.0)) == pytest.approx(5.0, rel=1e-13)
    assert psi_inv_lower(0.3) == pytest.approx(PSI_LOW_03, rel=1e-13)
    assert psi_inv_upper(0.3) == pytest.approx(PSI_UP_03, rel=1e-13)


def test_normal_cdf():
    assert std_normal_cdf(0.0) == 0.5
    assert std_normal_cdf(-40.0) < 1e-300
    assert std_normal_cdf(1.96) == pytest.approx(PHI_196, abs=1e-14)


def test_array_in_array_out():
    x = np.array([-0.3, -0.1, -1e-5])
    assert lambert_w0(x).shape == (3,)
    assert isinstance(lambert_w0(-0.1), float)


@settings(max_examples=300, deadline=None)
@given(branch_args)
def test_lambert_residuals(x):
    for w in (lambert_w0(x), lambert_wm1(x)):
        assert abs(w * math.exp(w) - x) <= 1e-12 * abs(x)
    assert -1.0 <= lambert_w0(x) < 0.0
    assert lambert_wm1(x) <= -1.0


@settings(max_examples=100, deadline=None)
@given(st.lists(branch_args, min_size=2, max_size=30))
def test_lambert_monotone(xs):
    x = np.sort(np.array(xs))
    assert np.all(np.diff(lambert_w0(x)) >= 0.0)
    assert np.all(np.diff(lambert_wm1(x)) <= 0.0)


def _bisect_psi(c, lo, hi, rising):
    for _ in range(200):
        m = 0.5 * (lo + hi)
        if (psi(m) < c) == rising:
            lo = m
        else:
            hi = m
    return 0.5 * (lo + hi)


@settings(max_examples=200, deadline=None)
@given(psi_levels)
def test_psi_round_trip(c):
    lo, hi = psi_inv_lower(c), psi_inv_upper(c)
    assert lo <= 2.0 <= hi
    assert psi(lo) == pytest.approx(c, rel=1e-10)
    if c > 1e-250:
        assert psi(hi) == pytest.approx(c, rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=1e-3, max_value=PSI_MAX * (1 - 1e-6)))
def test_psi_inverse_matches_bisection(c):
    assert psi_inv_lower(c) == pytest.approx(_bisect_psi(c, 0.0, 2.0, True), rel=1e-10)
    assert psi_inv_upper(c) == pytest.approx(_bisect_psi(c, 2.0, 60.0, False), rel=1e-10)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-30, max_value=30))
def test_normal_cdf_symmetry(z):
    assert std_normal_cdf(z) + std_normal_cdf(-z) == pytest.approx(1.0, abs=1e-10)
    assert std_normal_cdf(z) <= std_normal_cdf(z + 0.1)
