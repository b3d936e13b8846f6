import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphwave.bilinear import abel_poisson_wavelet, gauss_weierstrass_wavelet
from sphwave.euclid import (
    euclid_scales,
    euclid_study,
    euclidean_limit_report,
    euclidean_probe,
    generating_family,
    hankel_oracle,
    inverse_stereographic,
    l2_crosscheck,
    predicted_ratio,
    small_scale_sum,
    square_integrability,
    tabulated_psi,
    theta_asymptotic_constant,
)
from sphwave.linear import mexican_needlet_family, poisson_multipole_family


def ap_psi(t):
    return np.sqrt(2 * t) * np.exp(-t)


def test_predicted_ratio_frozen():
    assert predicted_ratio(0.5) == pytest.approx(2.0, rel=1e-14)
    assert predicted_ratio(1.0) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-14)


def test_inverse_stereographic():
    assert inverse_stereographic(2.0) == pytest.approx(math.pi / 2)
    with pytest.raises(ValueError):
        inverse_stereographic(-1.0)
    assert theta_asymptotic_constant(np.array([1.0]), [1e-2]) == pytest.approx(1 / 12, rel=1e-3)


def test_oracle_n3_closed_form():
    # lam = 1: H(r) = (2/sqrt(pi)) Gamma(5/2) (1+r^2)^(-5/4) sin(5/2 arctan r) / r
    r = np.array([0.0, 0.3, 1.0, 2.5, 6.0])
    H = hankel_oracle(ap_psi, 1.0, r).values
    exact = 2 / math.sqrt(math.pi) * math.gamma(2.5) * (1 + r[1:] ** 2) ** -1.25 * np.sin(2.5 * np.arctan(r[1:])) / r[1:]
    assert np.allclose(H[1:], exact, rtol=1e-9, atol=1e-12)
    assert H[0] == pytest.approx(2 / math.sqrt(math.pi) * math.gamma(2.5) * 2.5, rel=1e-9)


def test_oracle_n2_against_mpmath():
    r = [0.5, 3.0]
    H = hankel_oracle(ap_psi, 0.5, np.array(r)).values
    for ri, h in zip(r, H):
        ref = mpmath.quadosc(lambda t: t * mpmath.sqrt(2 * t) * mpmath.exp(-t) * mpmath.besselj(0, t * ri),
                             [0, mpmath.inf], omega=ri)
        assert h == pytest.approx(float(ref), rel=1e-8, abs=1e-12)


def test_scales_sequence():
    s = euclid_scales()
    assert s[0] == pytest.approx(1.6e-2) and s[-1] == pytest.approx(1e-3)
    assert np.allclose(s[:-1] / s[1:], 2)


def test_probe_requires_decreasing_scales():
    with pytest.raises(ValueError):
        euclidean_probe(abel_poisson_wavelet(2), [1.0], [1e-3, 1e-2])


@pytest.mark.parametrize("n", [2, 3])
def test_abel_poisson_limit(n):
    rep = euclid_study(abel_poisson_wavelet(n))
    assert rep.passed
    assert min(rep.cauchy_rates) > 1.8
    assert rep.ratio_median == pytest.approx(predicted_ratio((n - 1) / 2), rel=2e-3)


@pytest.mark.parametrize("make", [
    lambda n: gauss_weierstrass_wavelet(n),
    lambda n: poisson_multipole_family(n, 2),
    lambda n: mexican_needlet_family(n, 1, "bilinear"),
])
def test_other_families(make):
    rep = euclid_study(make(2))
    assert rep.passed, rep.to_json()


def test_gw_uses_sqrt_convention():
    rep = euclid_study(gauss_weierstrass_wavelet(3))
    assert "sqrt" in rep.convention
    assert rep.ratio_spread < 1e-4


def test_non_square_integrable_fails_precondition():
    fam = generating_family(2, lambda t: 1 / (1 + t))
    rep = euclid_study(fam)
    assert not rep.passed
    assert not rep.precondition["ok"]
    assert "square integrable" in rep.precondition["reason"]
    json.dumps(rep.to_json(), allow_nan=True)


def test_square_integrability():
    assert square_integrability(ap_psi, 2)["value"] == pytest.approx(0.5, rel=1e-10)  # 2 Gamma(3) / 2^3
    assert not square_integrability(lambda t: 1 / (1 + t), 2)["finite"]


def test_l2_crosscheck():
    for lam in (0.5, 1.0):
        assert l2_crosscheck(ap_psi, lam)["relative_difference"] < 1e-4


def test_small_scale_sum_is_informational():
    assert small_scale_sum(ap_psi, 2, 1e-3) > 0.1


@given(st.floats(0.05, 30))
def test_tabulated_psi_reproduces_power_tail(x):
    t = np.linspace(0.1, 10, 200)
    psi = tabulated_psi(t, t ** -2.0)
    if x <= 10:
        assert psi(x) == pytest.approx(np.interp(x, t, t ** -2.0))
    else:
        assert psi(x) == pytest.approx(x ** -2.0, rel=1e-9)


def test_tabulated_psi_validation():
    with pytest.raises(ValueError):
        tabulated_psi([1.0, 0.5], [1.0, 2.0])


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_tabulated_profile_matches_analytic():
    t = np.linspace(0, 40, 4001)
    fam = generating_family(2, tabulated_psi(t, ap_psi(t)))
    rep = euclid_study(fam)
    assert rep.passed


def test_report_csv_columns():
    rep = euclid_study(abel_poisson_wavelet(2), r=np.linspace(0.1, 5, 6))
    rows = rep.to_csv().splitlines()
    assert rows[0] == "r,rho,probe,oracle,ratio"
    assert len(rows) == 1 + 6 * 5


def test_complex_probe_rejected():
    fam = abel_poisson_wavelet(2).scaled(1j)
    probe = euclidean_probe(fam, np.array([0.5, 1.0]), euclid_scales(1e-2, 3))
    oracle = hankel_oracle(ap_psi, 0.5, np.array([0.5, 1.0]))
    with pytest.raises(ValueError, match="complex"):
        euclidean_limit_report(probe, oracle)
