import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphwave.kernels import (
    KernelFamily,
    abel_poisson_family,
    check_approximate_identity,
    constant_family,
    effective_degree,
    gauss_weierstrass_family,
    tabulated_family,
)
from sphwave.scales import log_grid
from sphwave.specfun import gegenbauer_sum


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("rho", [0.05, 0.3, 2.0])
def test_abel_poisson_closed_form_matches_series(n, rho):
    fam = abel_poisson_family(n)
    t = np.linspace(-1, 1, 41)
    L = effective_degree(lambda l: fam.coefficients(rho, l), fam.lam, 1e-16)
    series = gegenbauer_sum(fam.coefficients(rho, np.arange(L + 1)), fam.lam, t).real
    # the series cancels heavily near t = -1, so compare on the scale of the peak
    assert np.max(np.abs(fam.values(rho, t) - series)) < 1e-10 * np.max(np.abs(series))


def test_abel_poisson_n2_frozen():
    # Poisson kernel (1 - r^2) / (1 + r^2 - 2 r t)^(3/2) at r = e^-1, t = 0
    r = math.exp(-1)
    assert abel_poisson_family(2).values(1.0, 0.0) == pytest.approx((1 - r * r) / (1 + r * r) ** 1.5, rel=1e-14)


@given(st.integers(2, 6), st.floats(1e-4, 1e3))
def test_degree_zero_is_one(n, rho):
    for fam in (abel_poisson_family(n), gauss_weierstrass_family(n)):
        assert fam.coefficients(rho, np.array([0]))[0] == 1.0


@given(st.integers(2, 5), st.floats(1e-3, 10))
def test_analytic_derivative(n, rho):
    for fam in (abel_poisson_family(n), gauss_weierstrass_family(n)):
        l = np.arange(6)
        h = rho * 1e-6
        fd = (fam.coefficients(rho + h, l) - fam.coefficients(rho - h, l)) / (2 * h)
        assert np.allclose(fam.derivative(rho, l), fd, rtol=1e-5, atol=1e-9)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_l1_norms_are_one(n):
    # both kernels are positive with unit mean
    for fam in (abel_poisson_family(n), gauss_weierstrass_family(n)):
        for rho in (1e-3, 0.1, 10.0):
            assert fam.l1_norm(rho) == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ai_limit_extrapolated(n):
    for fam in (abel_poisson_family(n), gauss_weierstrass_family(n)):
        rep = check_approximate_identity(fam)
        assert rep.singular_integral_normalized
        assert rep.monotone_tail
        assert max(rep.extrapolated_residuals) < (1e-6 if fam.label == "abel-poisson" else 1e-3)
        assert rep.l1_sup == pytest.approx(1.0, rel=1e-8)


def test_ai_residual_at_smallest_scale_is_analytic():
    # the residual read at rho_min is (lam+l)/lam (1 - e^{-l rho}) exactly
    rep = check_approximate_identity(abel_poisson_family(2))
    l = np.array(rep.degrees)
    assert np.allclose(rep.residuals, (0.5 + l) / 0.5 * -np.expm1(-l * 1e-4), rtol=1e-12)


def test_residual_shrinks_with_rho_min():
    fam = gauss_weierstrass_family(3)
    a = check_approximate_identity(fam, log_grid(1e-7, 1e3, 40), tol=1e-3)
    b = check_approximate_identity(fam, log_grid(1e-4, 1e3, 40), tol=1e-3)
    assert a.max_residual == pytest.approx(b.max_residual * 1e-3, rel=0.05)
    assert a.passed


def test_broken_families_fail():
    half = KernelFamily(2, lambda rho, l: 0.5 * abel_poisson_family(2).coefficients(rho, l), "half")
    rep = check_approximate_identity(half)
    assert not rep.passed and not rep.singular_integral_normalized
    assert not check_approximate_identity(constant_family(2)).passed


def test_report_json_shape():
    out = check_approximate_identity(abel_poisson_family(2), log_grid(1e-6, 1, 10)).to_json()
    assert out["kind"] == "approximate-identity"
    assert out["verdict"] in ("pass", "fail")
    assert out["tested_range"] == [pytest.approx(1e-6), pytest.approx(1.0)]


def test_tabulated_family_interpolates_log_linearly():
    ap = abel_poisson_family(2)
    rhos = [0.1, 1.0]
    tab = tabulated_family(2, rhos, [ap.coefficients(r, np.arange(5)) for r in rhos])
    mid = math.sqrt(0.1)
    expect = 0.5 * (ap.coefficients(0.1, np.arange(5)) + ap.coefficients(1.0, np.arange(5)))
    assert np.allclose(tab.coefficients(mid, np.arange(5)), expect)
    assert np.allclose(tab.coefficients(1e-5, np.arange(5)), ap.coefficients(0.1, np.arange(5)))
    assert tab.coefficients(0.5, np.array([7]))[0] == 0
    assert "log(rho)" in check_approximate_identity(tab, log_grid(1e-2, 1, 5), L=4).notes[-1]


def test_effective_degree_grows_as_rho_shrinks():
    fam = abel_poisson_family(2)
    assert fam.effective_degree(1e-3) > fam.effective_degree(1e-2) > fam.effective_degree(1e-1)
