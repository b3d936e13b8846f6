"""Acceptance criteria 1-12.

Each criterion is a function returning (ok, detail); the pytest tests assert
``ok`` and a summary line per criterion is printed at the end of the module.
Run directly (``python3 tests/test_acceptance.py``) for the summary alone.
"""
from __future__ import annotations

import dataclasses
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from oracles import gegenbauer_series
from sphwave import cli
from sphwave.bilinear import (
    ScalingFunction,
    WeightVectors,
    abel_poisson_wavelet,
    bilinear_synthesize,
    bilinear_transform,
    check_bilinear_admissibility,
    gauss_weierstrass_wavelet,
    generating_function_admissibility,
    isometry_check,
    nonzonal_from_weights,
    relative_error,
    wavelet_from_kernel,
)
from sphwave.dilation import dilate, dilation_family
from sphwave.euclid import euclid_study
from sphwave.kernels import KernelFamily, abel_poisson_family, check_approximate_identity, gauss_weierstrass_family
from sphwave.linear import (
    check_linear_admissibility,
    gauss_weierstrass_linear_family,
    linear_reconstruct,
    linear_transform,
    mexican_needlet_family,
    poisson_multipole_family,
)
from sphwave.scales import ScaleGrid
from sphwave.specfun import SphereDim, gegenbauer, gegenbauer_table, harmonic_dimension
from sphwave.zonal import (
    HarmonicSpectrum,
    ZonalSamples,
    ZonalSpectrum,
    coefficients_from_samples,
    default_order,
    evaluate,
    fourier_gegenbauer_bridge,
    lp_norm,
)

# pinned tolerances
TOL_SERIES = 1e-9
TOL_QUAD = 1e-10
TOL_AI = 1e-3
TOL_HATK0 = 1e-12
TOL_COMPOSE = 1e-10
TOL_L1 = 1e-8
TOL_DILATED_AI = 1e-2
TOL_GEN = 1e-8
TOL_ADM = 1e-6
TOL_SCALING = 1e-8
TOL_ISO = 1e-3
TOL_RT = 1e-3
MIN_RATE = 1.5
MAX_SPREAD = 0.02

DILATION_RHO0 = 0.5  # width of the Abel-Poisson test profile
RESULTS: dict[int, tuple[bool, str]] = {}


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def exact_at_one(l, lam: Fraction) -> Fraction:
    c_prev, c = Fraction(1), 2 * lam
    if l == 0:
        return c_prev
    for k in range(1, l):
        c_prev, c = c, (2 * (k + lam) * c - (k + 2 * lam - 1) * c_prev) / (k + 1)
    return c


# --------------------------------------------------------------------------


def criterion_1():
    def run():
        t = np.linspace(-1.0, 1.0, 101)
        worst = 0.0
        for lam in (0.5, 1.0, 1.5, 2.0):
            table = gegenbauer_table(30, lam, t)
            for l in range(31):
                ref = np.array([gegenbauer_series(l, lam, x) for x in t])
                scale = max(np.max(np.abs(ref)), 1e-300)
                worst = max(worst, float(np.max(np.abs(table[l] - ref)) / scale))
        exact = all(
            exact_at_one(l, Fraction(lam2, 2)) == math.comb(lam2 + l - 1, l) and gegenbauer(l, lam2 / 2, 1.0) == math.comb(lam2 + l - 1, l)
            for lam2 in (1, 2) for l in range(31)
        )
        return worst, exact

    (worst, exact), dt = timed(run)
    ok = worst < TOL_SERIES and exact and dt < 5
    return ok, f"max rel. deviation {worst:.2e} (< {TOL_SERIES:g}), C_l(1)=binom exact: {exact}, {dt:.2f}s (< 5s)"


def criterion_2():
    def run():
        rng = np.random.default_rng(2)
        worst = 0.0
        for n in (2, 3, 4, 5):
            g = ZonalSpectrum(n, rng.normal(size=49) + 1j * rng.normal(size=49))
            samples = ZonalSamples.sample(lambda t: evaluate(g, t), n, default_order(48))
            back = coefficients_from_samples(samples, 48)
            worst = max(worst, float(np.max(np.abs(back.coeffs - g.coeffs)) / np.max(np.abs(g.coeffs))))
        return worst

    worst, dt = timed(run)
    ok = worst < TOL_QUAD and dt < 10
    return ok, f"max rel. coefficient error {worst:.2e} (< {TOL_QUAD:g}), {dt:.2f}s (< 10s)"


def criterion_3():
    def run():
        worst, hat0 = {}, 0.0
        for n in (2, 3, 4):
            for fam in (abel_poisson_family(n), gauss_weierstrass_family(n)):
                lam = fam.lam
                l = np.arange(17)
                resid = float(np.max(np.abs(fam.coefficients(1e-4, l) - (lam + l) / lam)))
                worst[fam.label] = max(worst.get(fam.label, 0.0), resid)
                for rho in np.geomspace(1e-4, 1e3, 40):
                    hat0 = max(hat0, abs(fam.coefficients(rho, np.array([0]))[0] - 1.0))
        broken = KernelFamily(SphereDim(2), lambda rho, l: 0.5 * abel_poisson_family(2).coefficients(rho, l), "half-ap")
        broken_fails = not check_approximate_identity(broken).passed
        return worst, hat0, broken_fails

    (worst, hat0, broken_fails), dt = timed(run)
    ok = max(worst.values()) < TOL_AI and hat0 < TOL_HATK0 and broken_fails and dt < 5
    res = ", ".join(f"{k} {v:.3e}" for k, v in worst.items())
    return ok, (f"residual at rho=1e-4, l<=16, n<=4: {res} (need < {TOL_AI:g}); "
                f"|K(0)-1| {hat0:.1e}; broken family rejected: {broken_fails}; {dt:.2f}s")


def criterion_4():
    def run():
        out = {}
        for n in (2, 3):
            base = abel_poisson_family(n)
            f = lambda t, base=base: base.values(DILATION_RHO0, t).real  # noqa: E731
            t = np.cos(np.linspace(0.0, math.pi, 201))
            comp = 0.0
            for a, b in ((0.3, 0.5), (2.0, 0.1), (0.05, 7.0)):
                lhs = dilate(dilate(f, a, n), b, n)(t)
                rhs = dilate(f, a * b, n)(t)
                comp = max(comp, float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs))))
            l1_ref = lp_norm(f, n, 1.0, width=DILATION_RHO0)
            l1 = max(abs(lp_norm(dilate(f, a, n), n, 1.0, width=2 * a * DILATION_RHO0) / l1_ref - 1.0)
                     for a in (1e-3, 1e-2, 0.3))
            fam = dilation_family(f, n)
            lam = (n - 1) / 2
            l = np.arange(17)
            ai = float(np.max(np.abs(fam.coefficients(1e-3, l) - (lam + l) / lam)))
            out[n] = (comp, l1, ai)
        return out

    res, dt = timed(run)
    ok = all(c < TOL_COMPOSE and l1 < TOL_L1 and ai < TOL_DILATED_AI for c, l1, ai in res.values()) and dt < 10
    parts = [f"n={n}: compose {c:.1e}, L1 {l1:.1e}, AI residual {ai:.2e}" for n, (c, l1, ai) in res.items()]
    return ok, "; ".join(parts) + f" (need < {TOL_COMPOSE:g}/{TOL_L1:g}/{TOL_DILATED_AI:g}), {dt:.2f}s"


def criterion_5():
    psi = lambda t: math.sqrt(2 * t) * math.exp(-t)  # noqa: E731
    analytic = 2.0 * 0.5  # int_0^inf 2 e^{-2t} dt
    numeric = generating_function_admissibility(psi, TOL_GEN)["value"]
    worst_gw = 0.0
    for n in (2, 3):
        rep = check_bilinear_admissibility(gauss_weierstrass_wavelet(n), ScaleGrid(), TOL_ADM)
        worst_gw = max(worst_gw, rep.max_residual)
    worst_sf = 0.0
    R = np.geomspace(1e-3, 1e2, 12)
    l = np.arange(33)
    for n in (2, 3):
        ap = abel_poisson_wavelet(n)
        quad = dataclasses.replace(ap, scaling_fn=None)
        K = abel_poisson_family(n)
        for sfam in (ap, quad):
            sf = ScalingFunction(sfam, completed=True)
            for r in R:
                k = K.coefficients(r, l)
                worst_sf = max(worst_sf, float(np.max(np.abs(sf.coefficients(r, l) - k) / np.abs(k).max())))
    ok = abs(analytic - 1) == 0 and abs(numeric - 1) < TOL_GEN and worst_gw < TOL_ADM and worst_sf < TOL_SCALING
    return ok, (f"AP generating integral analytic {analytic:g}, numeric dev {abs(numeric - 1):.1e}; "
                f"GW max residual {worst_gw:.1e}; AP scaling vs kernel {worst_sf:.1e}")


def criterion_6():
    def run():
        fam = abel_poisson_wavelet(3)
        grid = ScaleGrid()
        worst = 0.0
        for seed in range(20):
            rng = np.random.default_rng(1000 + seed)
            f = HarmonicSpectrum.random(3, 32, rng, min_degree=1)
            g = HarmonicSpectrum.random(3, 32, rng, min_degree=1)
            worst = max(worst, isometry_check(f, g, fam, grid)[2])
        return worst

    worst, dt = timed(run)
    ok = worst < TOL_ISO and dt < 30
    return ok, f"max isometry residual over 20 pairs {worst:.2e} (< {TOL_ISO:g}), {dt:.2f}s (< 30s)"


def criterion_7():
    grid = ScaleGrid()
    errs = {}
    for n in (2, 3):
        for fam in (abel_poisson_wavelet(n), gauss_weierstrass_wavelet(n)):
            f = HarmonicSpectrum.random(n, 32, 7, min_degree=1)
            errs[(fam.label, n)] = relative_error(f, bilinear_synthesize(bilinear_transform(f, fam, grid), fam, grid))
    worst = max(errs.values())
    return worst < TOL_RT, f"max relative L2 error {worst:.2e} (< {TOL_RT:g}) over AP/GW, n=2,3"


def criterion_8():
    grid = ScaleGrid()
    errs, isos = [], []
    for n in (2, 3):
        fams = [poisson_multipole_family(n, d) for d in (1, 2, 3)] + [gauss_weierstrass_linear_family(n)]
        for fam in fams:
            f = HarmonicSpectrum.random(n, 32, 7, min_degree=1)
            errs.append(relative_error(f, linear_reconstruct(linear_transform(f, fam, grid), fam, grid)))
            isos.append(isometry_check(f, f, fam, grid, transform=linear_transform)[2])
    ok = max(errs) < TOL_RT and min(isos) > 1e-2
    return ok, f"max relative L2 error {max(errs):.2e} (< {TOL_RT:g}); isometry residual {min(isos):.2f}..{max(isos):.2f} (O(1), expected)"


def criterion_9():
    worst_b = worst_l = 0.0
    zero = True
    rhos = np.geomspace(1e-4, 1e3, 30)
    for n in (2, 3):
        for r in (1, 2):
            b = mexican_needlet_family(n, r, "bilinear")
            lin = mexican_needlet_family(n, r, "linear")
            worst_b = max(worst_b, check_bilinear_admissibility(b, ScaleGrid(), TOL_ADM).max_residual)
            worst_l = max(worst_l, check_linear_admissibility(lin, ScaleGrid(), TOL_ADM).max_residual)
            zero &= all(fam.coefficients(rho, np.array([0]))[0] == 0 for fam in (b, lin) for rho in rhos)
    ok = worst_b < TOL_ADM and worst_l < TOL_ADM and zero
    return ok, f"bilinear residual {worst_b:.1e}, linear residual {worst_l:.1e} (< {TOL_ADM:g}), l=0 coefficient zero: {zero}"


def criterion_10():
    worst = 0.0
    for n, L in ((2, 12), (3, 4)):
        assert harmonic_dimension(n, L) <= 25
        for seed in (1, 2, 3):
            fam = nonzonal_from_weights(abel_poisson_family(n), WeightVectors.random(n, L, seed))
            worst = max(worst, check_bilinear_admissibility(fam, ScaleGrid(), TOL_ADM, L=L).max_residual)
    dev = 0.0
    for n in (2, 3):
        zon = wavelet_from_kernel(abel_poisson_family(n))
        nz = nonzonal_from_weights(abel_poisson_family(n), WeightVectors.zonal(n, 10))
        for rho in (1e-3, 0.1, 1.0, 10.0):
            h = nz.harmonic(rho, 10)
            ref = fourier_gegenbauer_bridge(zon.spectrum(rho, 10))
            dev = max(dev, (h - ref).norm() / ref.norm())
    ok = worst < TOL_ADM and dev < 1e-13
    return ok, f"random weights max residual {worst:.1e} (< {TOL_ADM:g}); delta weights vs zonal {dev:.1e}"


def criterion_11():
    def run():
        return {n: euclid_study(abel_poisson_wavelet(n), min_rate=MIN_RATE, max_spread=MAX_SPREAD) for n in (2, 3)}

    reps, dt = timed(run)
    ok = all(r.cauchy_ok and r.ratio_ok for r in reps.values()) and dt < 60
    parts = [f"n={n}: min rate {min(r.cauchy_rates):.2f}, spread {r.ratio_spread:.1e}" for n, r in reps.items()]
    return ok, "; ".join(parts) + f" (rate >= {MIN_RATE}, spread < {MAX_SPREAD}), {dt:.1f}s (< 60s)"


def criterion_12(tmp_dir):
    args = ["roundtrip", "--family", "abel-poisson-wavelet", "--n", "3", "--L", "12", "--seed", "7", "--quiet"]
    outs = []
    for i in range(2):
        p = tmp_dir / f"run{i}.json"
        cli.main(args + ["--out", str(p)])
        outs.append(p.read_bytes())
    p = tmp_dir / "run_sub.json"
    subprocess.run([sys.executable, "-m", "sphwave.cli", *args, "--out", str(p)], check=True)
    outs.append(p.read_bytes())
    ok = outs[0] == outs[1] == outs[2]
    return ok, f"two in-process runs and one fresh process byte-identical: {ok} ({len(outs[0])} bytes)"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


# --------------------------------------------------------------------------
# pytest


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    rep = request.config.pluginmanager.getplugin("terminalreporter")
    write = rep.write_line if rep else print
    write("")
    write("acceptance summary")
    for i in range(1, 13):
        if i in RESULTS:
            ok, detail = RESULTS[i]
            write(f"  criterion {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            write(f"  criterion {i:2d}: not run")


@pytest.mark.parametrize("number", range(1, 13))
def test_criterion(number, tmp_path):
    fn = CRITERIA[number]
    ok, detail = fn(tmp_path) if number == 12 else fn()
    RESULTS[number] = (ok, detail)
    assert ok, detail


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    failed = 0
    with tempfile.TemporaryDirectory() as d:
        for i, fn in CRITERIA.items():
            ok, detail = fn(Path(d)) if i == 12 else fn()
            failed += not ok
            print(f"criterion {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
    sys.exit(1 if failed else 0)
