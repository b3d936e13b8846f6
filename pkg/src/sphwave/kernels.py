"""Kernel families of singular integrals and the approximate-identity test.

A family is a map rho -> Gegenbauer coefficients. It forms an approximate
identity (for a uniformly L1-bounded family) exactly when every
coefficient tends to (lam+l)/lam as rho -> 0+.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .scales import ScaleGrid, log_grid
from .specfun import SphereDim, as_dim, gegenbauer_at_one, gegenbauer_norm_constant, gegenbauer_sum
from .zonal import DEFAULT_L, ZonalSpectrum, theta_rule

MAX_DEGREE = 1 << 20
# largest degree summed spatially by Clenshaw
MAX_SPATIAL_DEGREE = 1 << 16


@dataclass(frozen=True)
class KernelFamily:
    """A parametrised family rho -> zonal spectrum.

    ``coeff_fn(rho, l)`` returns coefficients for an integer array ``l``.
    Optional pieces: ``psi`` (generating function, coefficients equal
    (lam+l)/lam psi(l rho)), ``spatial(rho, t)`` (closed-form values) and
    ``dcoeff_fn(rho, l)`` (analytic rho-derivative of the coefficients).
    """

    dim: SphereDim
    coeff_fn: Callable[[float, np.ndarray], np.ndarray]
    label: str = "kernel"
    psi: Callable | None = None
    spatial: Callable | None = None
    dcoeff_fn: Callable | None = None
    width_fn: Callable | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dim", as_dim(self.dim))

    @property
    def lam(self):
        return self.dim.lam

    def coefficients(self, rho, l):
        l = np.asarray(l)
        return np.asarray(self.coeff_fn(float(rho), l), dtype=complex) * np.ones(l.shape)

    def spectrum(self, rho, L: int = DEFAULT_L) -> ZonalSpectrum:
        return ZonalSpectrum(self.dim, self.coefficients(rho, np.arange(L + 1)))

    __call__ = spectrum

    def derivative(self, rho, l, rel_step: float = 1e-5):
        """d/d rho of the coefficients; analytic if known, else central differences."""
        if self.dcoeff_fn is not None:
            return np.asarray(self.dcoeff_fn(float(rho), np.asarray(l)), dtype=complex)
        h = rho * rel_step
        return (self.coefficients(rho + h, l) - self.coefficients(rho - h, l)) / (2.0 * h)

    def effective_degree(self, rho, tol: float = 1e-14) -> int:
        """Smallest L such that |g(l)| C_l(1) < tol * max over l > L (sampled in blocks)."""
        return effective_degree(lambda l: self.coefficients(rho, l), self.lam, tol)

    def values(self, rho, t, tol: float = 1e-14):
        """Spatial values K_rho(t)."""
        if self.spatial is not None:
            return self.spatial(float(rho), np.asarray(t, dtype=float))
        L = self.effective_degree(rho, tol)
        if L > MAX_SPATIAL_DEGREE:
            raise ValueError(f"{self.label} at rho={rho:.3g} needs degree {L} for spatial evaluation")
        return gegenbauer_sum(self.coefficients(rho, np.arange(L + 1)), self.lam, t)

    def angular_width(self, rho) -> float:
        if self.width_fn is not None:
            return float(self.width_fn(rho))
        L = effective_degree(lambda l: self.coefficients(rho, l), self.lam, 1e-3)
        return math.pi / max(L, 1)

    def l1_norm(self, rho) -> float:
        """c(0,lam) int |K_rho(t)| (1-t^2)^(lam-1/2) dt (normalised L1 norm)."""
        th, wt = theta_rule(self.lam, self.angular_width(rho))
        vals = np.abs(self.values(rho, np.cos(th)))
        return float(gegenbauer_norm_constant(0, self.lam) * np.sum(wt * vals))


def effective_degree(coeffs: Callable, lam: float, tol: float = 1e-14, start: int = 64) -> int:
    L = start
    while True:
        l = np.arange(L + 1)
        mag = np.abs(coeffs(l)) * gegenbauer_at_one(l, lam)
        peak = mag.max()
        if peak == 0:
            return 0
        q = (3 * L) // 4
        if mag[q:].max() < tol * peak or L >= MAX_DEGREE:
            above = np.flatnonzero(mag >= tol * peak)
            return int(above[-1]) + 1 if above.size else 0
        L *= 2


# --------------------------------------------------------------------------
# built-in families


def abel_poisson(dim, rho: float, L: int = DEFAULT_L) -> ZonalSpectrum:
    """Abel-Poisson kernel: g(l) = (lam+l)/lam e^(-l rho)."""
    return abel_poisson_family(dim).spectrum(rho, L)


def gauss_weierstrass(dim, rho: float, L: int = DEFAULT_L) -> ZonalSpectrum:
    """Gauss-Weierstrass kernel: g(l) = (lam+l)/lam e^(-l(l+2 lam) rho)."""
    return gauss_weierstrass_family(dim).spectrum(rho, L)


def abel_poisson_family(dim) -> KernelFamily:
    dim = as_dim(dim)
    lam = dim.lam

    def coeffs(rho, l):
        return (lam + l) / lam * np.exp(-l * rho)

    def dcoeffs(rho, l):
        return -l * (lam + l) / lam * np.exp(-l * rho)

    def spatial(rho, t):
        r = math.exp(-rho)
        one_minus_r = -math.expm1(-rho)
        denom = one_minus_r * one_minus_r + 2.0 * r * (1.0 - t)
        return -math.expm1(-2.0 * rho) / denom ** (lam + 1.0)

    return KernelFamily(dim, coeffs, "abel-poisson", psi=lambda t: np.exp(-t),
                        spatial=spatial, dcoeff_fn=dcoeffs)


def gauss_weierstrass_family(dim) -> KernelFamily:
    dim = as_dim(dim)
    lam = dim.lam

    def coeffs(rho, l):
        return (lam + l) / lam * np.exp(-l * (l + 2 * lam) * rho)

    def dcoeffs(rho, l):
        b = l * (l + 2 * lam)
        return -b * (lam + l) / lam * np.exp(-b * rho)

    return KernelFamily(dim, coeffs, "gauss-weierstrass", dcoeff_fn=dcoeffs)


def constant_family(dim, value: complex = 1.0) -> KernelFamily:
    """g_rho(l) = value for all l and rho; never an approximate identity."""
    dim = as_dim(dim)
    return KernelFamily(dim, lambda rho, l: np.full(np.shape(l), value, dtype=complex),
                        f"constant-{value}", dcoeff_fn=lambda rho, l: np.zeros(np.shape(l)))


def tabulated_family(dim, rhos, table, label: str = "tabulated") -> KernelFamily:
    """Family interpolated linearly in log(rho) between tabulated spectra.

    Outside [min(rhos), max(rhos)] the end spectra are held constant;
    degrees beyond a row's length are zero.
    """
    dim = as_dim(dim)
    rhos = np.asarray(rhos, dtype=float)
    order = np.argsort(rhos)
    rhos = rhos[order]
    width = max(len(row) for row in table)
    tab = np.zeros((len(rhos), width), dtype=complex)
    for i, j in enumerate(order):
        tab[i, : len(table[j])] = table[j]
    logs = np.log(rhos)

    def coeffs(rho, l):
        x = min(max(math.log(rho), logs[0]), logs[-1])
        i = int(np.clip(np.searchsorted(logs, x) - 1, 0, len(logs) - 2)) if len(logs) > 1 else 0
        if len(logs) == 1:
            row = tab[0]
        else:
            s = (x - logs[i]) / (logs[i + 1] - logs[i])
            row = (1 - s) * tab[i] + s * tab[i + 1]
        l = np.asarray(l)
        out = np.zeros(l.shape, dtype=complex)
        ok = l < width
        out[ok] = row[l[ok]]
        return out

    meta = {"interpolation": "linear in log(rho), clamped outside "
                             f"[{rhos[0]:.6g}, {rhos[-1]:.6g}]"}
    return KernelFamily(dim, coeffs, label, meta=meta)


# --------------------------------------------------------------------------
# approximate-identity check


@dataclass
class AIReport:
    label: str
    n: int
    degrees: list
    rho_min: float
    residuals: list
    extrapolated_residuals: list
    monotone_tail: bool
    l1_norms: list
    rho_grid: list
    l1_sup: float
    l1_sup_at: float
    singular_integral_normalized: bool
    tol: float
    notes: list = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    @property
    def worst_degree(self):
        return self.degrees[int(np.argmax(self.residuals))] if self.residuals else None

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tol and math.isfinite(self.l1_sup)

    def to_json(self) -> dict:
        return {
            "kind": "approximate-identity", "family": self.label, "n": self.n, "tol": self.tol,
            "verdict": "pass" if self.passed else "fail",
            "rho_min": self.rho_min, "tested_range": [min(self.rho_grid), max(self.rho_grid)],
            "degrees": self.degrees, "limit_residuals": self.residuals,
            "max_residual": self.max_residual, "worst_degree": self.worst_degree,
            "extrapolated_limit_residuals": self.extrapolated_residuals,
            "residuals_monotone_near_zero": self.monotone_tail,
            "l1_sup": self.l1_sup, "l1_sup_at": self.l1_sup_at,
            "singular_integral_normalized": self.singular_integral_normalized,
            "notes": self.notes,
        }


def _richardson_limit(rhos, values):
    """Polynomial extrapolation to rho = 0 from the three smallest scales."""
    x = np.asarray(rhos[:3], dtype=float)
    y = np.asarray(values[:3])
    total = 0j
    for i in range(3):
        w = 1.0
        for j in range(3):
            if j != i:
                w *= (0.0 - x[j]) / (x[i] - x[j])
        total += w * y[i]
    return total


def check_approximate_identity(fam: KernelFamily, grid=None, tol: float = 1e-3, L: int = 16,
                               min_degree: int = 0) -> AIReport:
    """Test lim_{rho->0} g_rho(l) = (lam+l)/lam for l in [min_degree, L] and the L1 bound.

    ``grid`` is a ScaleGrid, an array of scales, or None for the default
    40 log-spaced points on [1e-4, 1e3]. The limit residual is read at the
    smallest scale; the L1 norms are computed on every grid point and their
    maximum is reported as the tested uniform bound.
    """
    if grid is None:
        rhos = log_grid(1e-4, 1e3, 40)
    elif isinstance(grid, ScaleGrid):
        rhos = grid.nodes
    else:
        rhos = np.sort(np.asarray(grid, dtype=float))
    lam = fam.lam
    l = np.arange(min_degree, L + 1)
    target = (lam + l) / lam
    coeff = np.array([fam.coefficients(r, l) for r in rhos])  # (scales, degrees)
    resid = np.abs(coeff - target)
    tail = resid[:5]
    monotone = bool(np.all(np.diff(tail, axis=0) >= -1e-15 * (1 + tail[1:])))
    limits = [_richardson_limit(rhos, coeff[:, i]) for i in range(len(l))]

    notes = []
    l1 = []
    for r in rhos:
        try:
            l1.append(fam.l1_norm(r))
        except (ValueError, FloatingPointError, OverflowError) as exc:
            l1.append(math.inf)
            notes.append(f"L1 norm failed at rho={r:.3g}: {exc}")
    l1 = np.asarray(l1)
    finite = np.isfinite(l1)
    sup = float(l1.max()) if finite.all() else math.inf
    sup_at = float(rhos[int(np.argmax(np.where(finite, l1, np.inf)))])
    all_rho0 = np.array([fam.coefficients(r, np.array([0]))[0] for r in rhos])
    normalized = bool(np.all(np.abs(all_rho0 - 1.0) < 1e-12))
    if fam.meta.get("interpolation"):
        notes.append("tabulated family: " + fam.meta["interpolation"])
    return AIReport(fam.label, fam.dim.n, [int(j) for j in l], float(rhos[0]),
                    [float(x) for x in resid[0]],
                    [float(abs(z - t)) for z, t in zip(limits, target)],
                    monotone, [float(x) for x in l1], [float(x) for x in rhos], sup, sup_at,
                    normalized, tol, notes)
