import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphwave.bilinear import (
    ScalingFunction,
    TransformField,
    WaveletFamily,
    WeightVectors,
    abel_poisson_wavelet,
    bilinear_synthesize,
    bilinear_transform,
    check_bilinear_admissibility,
    gauss_weierstrass_wavelet,
    generating_function_admissibility,
    isometry_check,
    monotonicity_violations,
    nonzonal_from_weights,
    relative_error,
    wavelet_from_kernel,
    xi_approximate_identity,
)
from sphwave.kernels import KernelFamily, abel_poisson_family, gauss_weierstrass_family
from sphwave.scales import ScaleGrid
from sphwave.specfun import harmonic_dimension
from sphwave.zonal import HarmonicSpectrum, degree_energy

GRID = ScaleGrid()


@pytest.fixture(scope="module", params=[2, 3])
def n(request):
    return request.param


def test_family_needs_exactly_one_rule():
    with pytest.raises(ValueError):
        WaveletFamily(2)
    with pytest.raises(ValueError):
        WaveletFamily(2, coeff_fn=lambda r, l: l, harmonic_fn=lambda r, L: None)


def test_generating_function_values():
    assert generating_function_admissibility(lambda t: math.sqrt(2 * t) * math.exp(-t))["value"] == pytest.approx(1, abs=1e-12)
    assert generating_function_admissibility(lambda t: t * math.exp(-t))["value"] == pytest.approx(0.25, rel=1e-10)
    bad = generating_function_admissibility(lambda t: 1 / (1 + t))
    assert bad["diverges_at_zero"] and not bad["admissible"]


@pytest.mark.parametrize("make", [abel_poisson_wavelet, gauss_weierstrass_wavelet])
def test_condition1_closed_form_wavelets(make, n):
    rep = check_bilinear_admissibility(make(n), GRID, 1e-6, L=16)
    assert rep.condition1, rep.max_residual
    assert rep.condition2
    assert rep.tail_fraction < 1e-8
    assert rep.degrees[0] == 1
    assert 1.0 <= rep.xi_l1_sup < 3.0
    # at higher degree the absolute residual grows with the target; relative stays tiny
    wide = check_bilinear_admissibility(make(n), GRID, 1e-6, L=48)
    assert max(r / t for r, t in zip(wide.residuals, wide.targets)) < 1e-8


def test_scaled_family_fails_by_factor(n):
    fam = abel_poisson_wavelet(n).scaled(2.0)
    rep = check_bilinear_admissibility(fam, GRID, 1e-6)
    assert not rep.passed
    assert np.allclose(rep.residuals, 3 * np.array(rep.targets), rtol=1e-6)


def test_order_declared_and_checked():
    fam = abel_poisson_wavelet(2)
    assert fam.order == 0
    liar = dataclasses.replace(gauss_weierstrass_wavelet(2), coeff_fn=lambda r, l: 1 + 0 * l)
    rep = check_bilinear_admissibility(liar, ScaleGrid(count=40))
    assert any("declared order" in s for s in rep.notes)


@pytest.mark.parametrize("kernel", [abel_poisson_family, gauss_weierstrass_family])
def test_from_kernel_matches_closed_form(kernel, n):
    built = wavelet_from_kernel(kernel(n))
    ref = abel_poisson_wavelet(n) if kernel is abel_poisson_family else gauss_weierstrass_wavelet(n)
    l = np.arange(20)
    for rho in (1e-3, 0.1, 2.0):
        assert np.allclose(np.abs(built.coefficients(rho, l)), np.abs(ref.coefficients(rho, l)), rtol=1e-8, atol=1e-12)
    assert built.order == 0


def test_from_kernel_rejects_increasing_kernel():
    grow = KernelFamily(2, lambda r, l: (0.5 + l) / 0.5 * (1 - np.exp(-l * r)) + (l == 0), "grow")
    assert monotonicity_violations(grow, np.geomspace(1e-3, 10, 20), 4)
    with pytest.raises(ValueError, match="l="):
        wavelet_from_kernel(grow, grid=np.geomspace(1e-3, 10, 20), L=4)
    lazy = wavelet_from_kernel(grow)
    with pytest.raises(ValueError, match="negative discriminant"):
        lazy.coefficients(0.5, np.arange(4))


def test_scaling_function_closed_form_vs_quadrature(n):
    ap = abel_poisson_wavelet(n)
    quad = dataclasses.replace(ap, scaling_fn=None)
    l = np.arange(1, 25)
    for R in (1e-3, 0.3, 5.0):
        assert np.allclose(ScalingFunction(ap).coefficients(R, l), ScalingFunction(quad).coefficients(R, l), rtol=1e-10)


def test_scaling_function_strict_and_completed():
    ap = abel_poisson_wavelet(2)
    assert ScalingFunction(ap).coefficients(0.5, np.array([0]))[0] == 0
    assert ScalingFunction(ap, completed=True).coefficients(0.5, np.array([0]))[0] == 1


def test_xi_is_approximate_identity(n):
    rep = xi_approximate_identity(abel_poisson_wavelet(n))
    assert max(rep.extrapolated_residuals) < 1e-2
    assert rep.singular_integral_normalized


@given(st.integers(0, 10 ** 6))
def test_roundtrip_property(seed):
    fam = abel_poisson_wavelet(2)
    f = HarmonicSpectrum.random(2, 12, seed, min_degree=1)
    back = bilinear_synthesize(bilinear_transform(f, fam, GRID), fam, GRID)
    assert relative_error(f, back) < 1e-8


@pytest.mark.parametrize("make", [abel_poisson_wavelet, gauss_weierstrass_wavelet])
def test_roundtrip_frozen_seed(make, n):
    f = HarmonicSpectrum.random(n, 32, 7, min_degree=1)
    fam = make(n)
    assert relative_error(f, bilinear_synthesize(bilinear_transform(f, fam, GRID), fam, GRID)) < 1e-8


def test_order_zero_loses_mean():
    fam = abel_poisson_wavelet(2)
    f = HarmonicSpectrum.random(2, 6, 1)
    back = bilinear_synthesize(bilinear_transform(f, fam, GRID), fam, GRID)
    assert abs(back[(0, (0,))]) == 0
    assert abs(f[(0, (0,))]) > 0


@given(st.integers(0, 10 ** 6))
def test_isometry_property(seed):
    rng = np.random.default_rng(seed)
    f = HarmonicSpectrum.random(3, 8, rng, 1)
    g = HarmonicSpectrum.random(3, 8, rng, 1)
    lhs, rhs, resid = isometry_check(f, g, abel_poisson_wavelet(3), GRID)
    assert resid < 1e-9


def test_transform_field_csv_and_grid_guard():
    fam = abel_poisson_wavelet(2)
    grid = ScaleGrid(count=10)
    w = bilinear_transform(HarmonicSpectrum.random(2, 2, 0), fam, grid)
    assert isinstance(w, TransformField) and len(w) == 10
    text = w.to_csv()
    assert text.splitlines()[0] == "rho,l,k1,re,im"
    assert len(text.splitlines()) == 1 + 10 * 9
    with pytest.raises(ValueError):
        bilinear_synthesize(w, fam, ScaleGrid(count=11))


def test_nonzonal_rejected_by_zonal_transform():
    fam = nonzonal_from_weights(abel_poisson_family(2), WeightVectors.equal(2, 4))
    with pytest.raises(TypeError):
        bilinear_transform(HarmonicSpectrum.random(2, 4, 0), fam, GRID)


# --------------------------------------------------------------------------
# weight vectors


def test_weight_validation():
    with pytest.raises(ValueError, match="inadmissible"):
        WeightVectors(2, 1, {0: [1.0], 1: [1.0, 1.0, 0.0]})
    with pytest.raises(ValueError, match="length"):
        WeightVectors(2, 1, {0: [1.0], 1: [1.0, 1.0]})


@pytest.mark.parametrize("n,L", [(2, 12), (3, 4), (4, 3)])
def test_random_weights_admissible(n, L):
    fam = nonzonal_from_weights(abel_poisson_family(n), WeightVectors.random(n, L, 11))
    rep = check_bilinear_admissibility(fam, GRID, 1e-6, L=30)
    assert rep.degrees[-1] == L
    assert rep.condition1
    assert any("limited" in s for s in rep.notes)


def test_energy_equals_zonal_energy():
    n, L = 3, 5
    zon = wavelet_from_kernel(abel_poisson_family(n))
    nz = nonzonal_from_weights(abel_poisson_family(n), WeightVectors.random(n, L, 2))
    lam = 1.0
    l = np.arange(L + 1)
    N = np.array([harmonic_dimension(n, j) for j in l])
    for rho in (0.01, 1.0):
        expect = np.abs(zon.coefficients(rho, l)) ** 2 * (lam / (lam + l)) ** 2 * N
        assert np.allclose(degree_energy(nz.harmonic(rho, L)), expect, rtol=1e-12)


def test_scale_dependent_weights():
    def raw(rho, l):
        v = np.ones(2 * l + 1, dtype=complex)
        v[0] += rho
        return v

    w = WeightVectors.normalized(2, 6, raw)
    assert w.scale_dependent
    fam = nonzonal_from_weights(abel_poisson_family(2), w)
    assert check_bilinear_admissibility(fam, GRID, 1e-6).condition1
    bad = WeightVectors(2, 6, raw)
    with pytest.raises(ValueError):
        bad.at(2, 0.3)
