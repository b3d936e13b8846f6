"""Bilinear spherical wavelets.

A zonal family rho -> Psi_rho is admissible for the weight alpha when

    int_0^inf |Psi_rho^(l)|^2 alpha(rho) d rho = ((lam+l)/lam)^2

for every degree above its order, and the kernels Xi_R = int_R^inf
Psi_rho * Psi_rho alpha d rho are uniformly L1 bounded. Transform and
synthesis act on Fourier coefficients: W f(rho) has coefficients
lam/(lam+l) a_l^k(f) conj(Psi_rho^(l)).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy import integrate

from .kernels import KernelFamily, check_approximate_identity
from .scales import ScaleGrid, alpha_function, log_grid
from .specfun import SphereDim, as_dim, harmonic_dimension, zonal_norm_constant
from .zonal import DEFAULT_L, HarmonicSpectrum, ZonalSpectrum, _full_index, fourier_gegenbauer_bridge

# far end of the scale axis used to read off lim_{R -> inf} of a kernel
RHO_INFINITY = 1e12


def _dims(n, L):
    return np.array([harmonic_dimension(n, int(j)) for j in range(L + 1)], dtype=float)


@dataclass(frozen=True)
class WaveletFamily:
    """A family rho -> Psi_rho, zonal or nonzonal.

    Zonal families give Gegenbauer coefficients through ``coeff_fn(rho, l)``.
    Nonzonal ones give a HarmonicSpectrum through ``harmonic_fn(rho, L)``.
    ``order`` m >= 0 declares vanishing coefficients for l <= m (-1: none).
    ``scaling_fn(R, l)``, when known, is the closed form of the scaling
    function; ``euclid`` carries the profile used by the Euclidean limit.
    """

    dim: SphereDim
    coeff_fn: Callable | None = None
    harmonic_fn: Callable | None = None
    label: str = "wavelet"
    psi: Callable | None = None
    order: int = -1
    scaling_fn: Callable | None = None
    alpha: str = "1/rho"
    euclid: dict | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dim", as_dim(self.dim))
        if (self.coeff_fn is None) == (self.harmonic_fn is None):
            raise ValueError("give exactly one of coeff_fn (zonal) or harmonic_fn (nonzonal)")
        if self.order < -1:
            raise ValueError("order must be >= -1")

    kind = "bilinear"

    @property
    def lam(self):
        return self.dim.lam

    @property
    def is_zonal(self) -> bool:
        return self.coeff_fn is not None

    def coefficients(self, rho, l):
        """Gegenbauer coefficients of a zonal family."""
        if not self.is_zonal:
            raise TypeError(f"{self.label} is not zonal")
        l = np.asarray(l)
        return np.asarray(self.coeff_fn(float(rho), l), dtype=complex) * np.ones(l.shape)

    def spectrum(self, rho, L: int = DEFAULT_L) -> ZonalSpectrum:
        return ZonalSpectrum(self.dim, self.coefficients(rho, np.arange(L + 1)))

    def harmonic(self, rho, L: int) -> HarmonicSpectrum:
        """Fourier coefficients a_l^k(Psi_rho), l <= L."""
        if self.is_zonal:
            return fourier_gegenbauer_bridge(self.spectrum(rho, L))
        return self.harmonic_fn(float(rho), L)

    def energy(self, rho, L: int) -> np.ndarray:
        """sum_k |a_l^k(Psi_rho)|^2 for l = 0..L."""
        l = np.arange(L + 1)
        if self.is_zonal:
            return np.abs(self.coefficients(rho, l)) ** 2 / zonal_norm_constant(self.dim.n, l) ** 2
        h = self.harmonic_fn(float(rho), L)
        out = np.zeros(L + 1)
        np.add.at(out, h.degrees, np.abs(h.values) ** 2)
        return out

    def table(self, rhos, l) -> np.ndarray:
        """Coefficients on a grid of scales, shape (len(rhos), len(l))."""
        return np.array([self.coefficients(r, l) for r in rhos])

    def kernel_view(self) -> KernelFamily:
        """The family seen as a kernel family, for spatial evaluation."""
        return KernelFamily(self.dim, self.coefficients, self.label, psi=self.psi)

    def values(self, rho, t):
        return self.kernel_view().values(rho, t)

    def scaled(self, c: complex) -> "WaveletFamily":
        """c * Psi_rho (useful for negative tests)."""
        if self.is_zonal:
            fn = self.coeff_fn
            return replace(self, coeff_fn=lambda rho, l: c * fn(rho, l), label=f"{c}*{self.label}",
                           scaling_fn=None, psi=None)
        hf = self.harmonic_fn
        return replace(self, harmonic_fn=lambda rho, L: hf(rho, L) * c, label=f"{c}*{self.label}",
                       scaling_fn=None)


# --------------------------------------------------------------------------
# scale integrals


def _tail_integral(func: Callable, R: float, alpha, upper: float = 1e8):
    """int_R^upper func(rho) alpha(rho) d rho, vector valued, in u = log rho.

    The integrand must be negligible at ``upper``; otherwise the tail is
    reported as divergent.
    """
    a = alpha_function(alpha)

    def g(u):
        rho = math.exp(u)
        return np.asarray(func(rho)) * (rho * float(a(np.array(rho))))

    if R >= upper:
        return np.zeros_like(np.asarray(func(upper), dtype=float))
    val, err, info = integrate.quad_vec(g, math.log(R), math.log(upper), epsabs=1e-14, epsrel=1e-11,
                                        full_output=True)
    end = np.abs(g(math.log(upper)))
    if not np.all(np.isfinite(val)) or not info.success or np.any(end > 1e-12 * (np.abs(val) + 1e-300)):
        raise ArithmeticError(f"scale integral from R={R:.3g} did not converge")
    return val


@dataclass(frozen=True)
class ScalingFunction:
    """R -> Phi_R with Phi_R^(l) = (int_R^inf |Psi_rho^(l)|^2 alpha d rho)^(1/2).

    ``completed`` adds (lam+l)/lam for l <= order, the kernel used for
    wavelets of order m; the plain version follows the definition as printed.
    """

    family: WaveletFamily
    alpha: str = "1/rho"
    completed: bool = False

    @property
    def dim(self):
        return self.family.dim

    def coefficients(self, R, l):
        fam = self.family
        lam = fam.lam
        l = np.asarray(l)
        if fam.scaling_fn is not None and self.alpha == fam.alpha:
            out = np.asarray(fam.scaling_fn(float(R), l), dtype=float) * np.ones(l.shape)
        elif fam.is_zonal:
            out = np.sqrt(_tail_integral(lambda r: np.abs(fam.coefficients(r, l)) ** 2, R, self.alpha))
        else:
            L = int(l.max())
            N = _dims(fam.dim.n, L)
            e = _tail_integral(lambda r: fam.energy(r, L), R, self.alpha)
            out = np.sqrt(e / N * ((lam + np.arange(L + 1)) / lam) ** 2)[l]
        if self.completed and fam.order >= 0:
            low = l <= fam.order
            out = np.where(low, (lam + l) / lam, out)
        return out

    def spectrum(self, R, L: int = DEFAULT_L) -> ZonalSpectrum:
        return ZonalSpectrum(self.dim, self.coefficients(R, np.arange(L + 1)))

    def xi(self, R, l):
        """Xi_R^(l) = lam/(lam+l) Phi_R^(l)^2 (so that Phi_R * Phi_R = Xi_R)."""
        lam = self.family.lam
        l = np.asarray(l)
        return lam / (lam + l) * self.coefficients(R, l) ** 2

    def kernel_family(self) -> KernelFamily:
        return KernelFamily(self.dim, self.coefficients, f"scaling[{self.family.label}]")

    def xi_family(self) -> KernelFamily:
        return KernelFamily(self.dim, self.xi, f"xi[{self.family.label}]")


def scaling_function(fam: WaveletFamily, alpha: str = "1/rho", completed: bool = False) -> ScalingFunction:
    return ScalingFunction(fam, alpha, completed)


# --------------------------------------------------------------------------
# admissibility


def generating_function_admissibility(psi: Callable, tol: float = 1e-8) -> dict:
    """int_0^inf |psi(t)|^2 dt / t, with a divergence check near t = 0.

    The integral is admissible when it equals 1 within ``tol``.
    """
    def g(t):
        return abs(psi(t)) ** 2 / t if t > 0 else 0.0

    # |psi(t)|^2 / t must be integrable at 0: compare int_eps^(10 eps) for shrinking eps
    near = [integrate.quad(g, eps, 10 * eps, limit=200)[0] for eps in (1e-6, 1e-9, 1e-12)]
    diverges = near[-1] > 1e-3 and near[-1] >= 0.5 * near[0]
    if diverges:
        return {"value": math.inf, "admissible": False, "diverges_at_zero": True}
    a, _ = integrate.quad(g, 0.0, 1.0, limit=400)
    b, _ = integrate.quad(g, 1.0, math.inf, limit=400)
    value = a + b
    return {"value": value, "admissible": bool(abs(value - 1.0) < tol), "diverges_at_zero": False}


def default_R_grid():
    return log_grid(1e-2, 1e2, 20)


@dataclass
class AdmissibilityReport:
    kind: str
    label: str
    n: int
    order: int
    degrees: list
    integrals: list
    targets: list
    residuals: list
    tol: float
    grid: dict
    tail_fraction: float
    R_grid: list
    xi_l1: list
    xi_l1_sup: float
    xi_l1_sup_at: float
    bound: float | None = None
    summable: bool | None = None
    notes: list = field(default_factory=list)

    @property
    def max_residual(self):
        return max(self.residuals) if self.residuals else 0.0

    @property
    def worst_degree(self):
        return self.degrees[int(np.argmax(self.residuals))] if self.residuals else None

    @property
    def condition1(self) -> bool:
        return self.max_residual < self.tol

    @property
    def condition2(self) -> bool:
        if not math.isfinite(self.xi_l1_sup):
            return False
        return self.bound is None or self.xi_l1_sup <= self.bound

    @property
    def passed(self) -> bool:
        return self.condition1 and self.condition2

    def to_json(self) -> dict:
        return {
            "kind": f"{self.kind}-admissibility", "family": self.label, "n": self.n, "order": self.order,
            "verdict": "pass" if self.passed else "fail", "tol": self.tol,
            "condition1": {"pass": self.condition1, "degrees": self.degrees, "integrals": self.integrals,
                           "targets": self.targets, "residuals": self.residuals,
                           "max_residual": self.max_residual, "worst_degree": self.worst_degree},
            "condition2": {"pass": self.condition2, "R_grid": self.R_grid, "l1_norms": self.xi_l1,
                           "sup": self.xi_l1_sup, "worst_R": self.xi_l1_sup_at, "bound": self.bound,
                           "tested_range": [min(self.R_grid), max(self.R_grid)] if self.R_grid else None},
            "grid": self.grid, "tail_fraction": self.tail_fraction,
            "summable": self.summable, "notes": self.notes,
        }


def _sup_l1(kfam: KernelFamily, Rs):
    norms, notes = [], []
    for R in Rs:
        try:
            norms.append(kfam.l1_norm(R))
        except (ValueError, ArithmeticError) as exc:
            norms.append(math.inf)
            notes.append(f"L1 norm failed at R={R:.3g}: {exc}")
    norms = np.asarray(norms)
    sup = float(norms.max()) if norms.size else 0.0
    at = float(Rs[int(np.argmax(norms))]) if norms.size else math.nan
    return [float(x) for x in norms], sup, at, notes


def summability(sf: ScalingFunction, R: float = 1.0, L_max: int = 4096) -> bool:
    """Informational: does sum_l (lam+l)/lam Phi_R^(l)^2 converge (tail < 1e-8 of total)?"""
    lam = sf.family.lam
    l = np.arange(L_max + 1)
    try:
        terms = (lam + l) / lam * sf.coefficients(R, l) ** 2
    except ArithmeticError:
        return False
    total = terms.sum()
    if not math.isfinite(total):
        return False
    return bool(terms[L_max // 2:].sum() <= 1e-8 * max(total, 1e-300))


def check_bilinear_admissibility(fam: WaveletFamily, grid: ScaleGrid | None = None, tol: float = 1e-6,
                                 L: int = 16, R_grid=None, bound: float | None = None) -> AdmissibilityReport:
    """Condition 1 per degree l in (order, L] on the scale grid; condition 2 on an R grid.

    Zonal: int |Psi^(l)|^2 alpha = ((lam+l)/lam)^2. Nonzonal: the sum over k
    of int |a_l^k|^2 alpha equals N(n, l). Condition 2 reports
    sup_R ||Xi_R||_1 over ``R_grid``; ``bound`` is an optional threshold.
    """
    grid = grid or ScaleGrid(alpha=fam.alpha)
    lam = fam.lam
    n = fam.dim.n
    notes = []
    if not fam.is_zonal and "max_degree" in fam.meta and L > fam.meta["max_degree"]:
        L = int(fam.meta["max_degree"])
        notes.append(f"degrees limited to {L} by the weight vectors")
    l = np.arange(max(fam.order + 1, 0), L + 1)
    if fam.is_zonal:
        vals = np.abs(fam.table(grid.nodes, l)) ** 2
        targets = ((lam + l) / lam) ** 2
    else:
        vals = np.array([fam.energy(r, L)[l] for r in grid.nodes])
        targets = _dims(n, L)[l]
    integrals = grid.integrate(vals)
    resid = np.abs(integrals - targets)
    ends = grid.weights[[0, -1], None] * vals[[0, -1]]
    tail = float(np.max(ends.sum(axis=0) / np.maximum(np.abs(integrals), 1e-300))) if l.size else 0.0
    if tail > tol:
        notes.append(f"grid ends carry {tail:.2e} of the integral; widen the scale range")
    if fam.order >= 0:
        low = np.arange(fam.order + 1)
        worst = max(float(np.max(np.abs(fam.energy(r, fam.order)[low]))) for r in grid.nodes[:: max(1, len(grid) // 20)])
        if worst > 1e-24:
            notes.append(f"declared order {fam.order} but coefficients up to l={fam.order} do not vanish")

    Rs = default_R_grid() if R_grid is None else np.asarray(R_grid, dtype=float)
    sf = ScalingFunction(fam, grid.alpha)
    norms, sup, at, more = _sup_l1(sf.xi_family(), Rs)
    notes += more
    summable = summability(sf) if fam.is_zonal else None
    if summable is False:
        notes.append("sum over l of (lam+l)/lam int_R^inf |Psi^(l)|^2 alpha does not converge (informational)")
    return AdmissibilityReport("bilinear", fam.label, n, fam.order, [int(j) for j in l],
                               [float(x) for x in integrals.real], [float(x) for x in targets],
                               [float(x) for x in resid], tol, grid.describe(), tail,
                               [float(x) for x in Rs], norms, sup, at, bound, summable, notes)


# --------------------------------------------------------------------------
# transforms


@dataclass(frozen=True)
class TransformField:
    """Per-scale Fourier coefficients W f(rho_j, .), shape (scales, entries)."""

    dim: SphereDim
    keys: tuple
    L: int
    rhos: np.ndarray
    values: np.ndarray
    kind: str = "bilinear"
    label: str = ""

    def at(self, j: int) -> HarmonicSpectrum:
        return HarmonicSpectrum(self.dim, self.keys, self.values[j], self.L, validate=False)

    def __len__(self):
        return len(self.rhos)

    @property
    def degrees(self):
        return np.array([l for l, _ in self.keys], dtype=int)

    def to_csv(self, fh=None) -> str | None:
        """Rows (rho, l, k_1..k_{n-1}, re, im)."""
        out = fh if fh is not None else io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["rho", "l"] + [f"k{i + 1}" for i in range(self.dim.n - 1)] + ["re", "im"])
        for j, rho in enumerate(self.rhos):
            for (l, k), v in zip(self.keys, self.values[j]):
                w.writerow([repr(float(rho)), l, *k, repr(float(v.real)), repr(float(v.imag))])
        return None if fh is not None else out.getvalue()


def _check_grid(field_: TransformField, grid: ScaleGrid):
    if len(field_.rhos) != len(grid) or not np.allclose(field_.rhos, grid.nodes, rtol=1e-14, atol=0):
        raise ValueError("transform field was computed on a different scale grid")


def _transform(f: HarmonicSpectrum, fam: WaveletFamily, grid: ScaleGrid, kind: str) -> TransformField:
    if not fam.is_zonal:
        raise TypeError(f"{kind} transform is implemented for zonal wavelets only")
    if f.dim != fam.dim:
        raise ValueError(f"signal lives on S^{f.dim.n}, wavelet on S^{fam.dim.n}")
    lam = fam.lam
    ls = np.arange(f.L + 1)
    table = fam.table(grid.nodes, ls)  # (scales, L+1)
    deg = f.degrees
    factor = lam / (lam + deg)
    vals = factor * f.values * np.conj(table[:, deg])
    return TransformField(f.dim, tuple(f.keys), f.L, grid.nodes.copy(), vals, kind, fam.label)


def bilinear_transform(f: HarmonicSpectrum, fam: WaveletFamily, grid: ScaleGrid | None = None) -> TransformField:
    """W f(rho, .) = f * conj(Psi_rho), spectrally."""
    return _transform(f, fam, grid or ScaleGrid(alpha=fam.alpha), "bilinear")


def bilinear_synthesize(field_: TransformField, fam: WaveletFamily, grid: ScaleGrid | None = None) -> HarmonicSpectrum:
    """f = int (W f(rho, .) * Psi_rho) alpha d rho, spectrally."""
    grid = grid or ScaleGrid(alpha=fam.alpha)
    _check_grid(field_, grid)
    lam = fam.lam
    table = fam.table(grid.nodes, np.arange(field_.L + 1))
    deg = field_.degrees
    integrand = (lam / (lam + deg)) * field_.values * table[:, deg]
    return HarmonicSpectrum(field_.dim, field_.keys, grid.integrate(integrand), field_.L, validate=False)


def isometry_check(f: HarmonicSpectrum, g: HarmonicSpectrum, fam: WaveletFamily, grid: ScaleGrid | None = None,
                   transform=bilinear_transform):
    """(lhs, rhs, residual) with lhs = int <W f, W g> alpha d rho, rhs = <f, g>.

    The residual is |lhs - rhs| / (||f|| ||g||), or 0 when both vanish.
    """
    grid = grid or ScaleGrid(alpha=fam.alpha)
    L = max(f.L, g.L)
    keys, a, b = f.aligned(g)
    fa = HarmonicSpectrum(f.dim, keys, a, L, validate=False)
    gb = HarmonicSpectrum(f.dim, keys, b, L, validate=False)
    wf = transform(fa, fam, grid)
    wg = transform(gb, fam, grid)
    lhs = complex(grid.integrate(np.sum(np.conj(wf.values) * wg.values, axis=1)))
    rhs = fa.inner(gb)
    scale = fa.norm() * gb.norm()
    resid = abs(lhs - rhs) / scale if scale > 0 else abs(lhs - rhs)
    return lhs, rhs, float(resid)


def relative_error(f: HarmonicSpectrum, g: HarmonicSpectrum) -> float:
    nf = f.norm()
    d = (f - g).norm()
    return d / nf if nf > 0 else d


# --------------------------------------------------------------------------
# wavelets from approximate identities


def kernel_limit(kernel: KernelFamily, l):
    """lim_{rho -> inf} of the kernel coefficients (read at a very large scale)."""
    return kernel.coefficients(RHO_INFINITY, l)


def monotonicity_violations(kernel: KernelFamily, rhos, L: int, rtol: float = 1e-10):
    """(l, rho) pairs where |K_rho^(l)|^2 increases with rho."""
    l = np.arange(L + 1)
    bad = []
    for r in rhos:
        k = kernel.coefficients(r, l)
        d = 2.0 * np.real(np.conj(k) * kernel.derivative(r, l))
        scale = np.abs(k) ** 2 / r + 1e-300
        for j in np.flatnonzero(d > rtol * scale):
            bad.append((int(j), float(r)))
    return bad


def wavelet_from_kernel(kernel: KernelFamily, alpha: str = "1/rho", grid=None, L: int = 64,
                        label: str | None = None) -> WaveletFamily:
    """Psi^(l) = (-(1/alpha) d/d rho |K_rho^(l)|^2)^(1/2).

    If ``grid`` (scales) is given, monotonicity of |K_rho^(l)|^2 is verified
    there for l <= L first. A negative value under the root raises with the
    offending (l, rho).
    """
    a = alpha_function(alpha)
    if grid is not None:
        rhos = grid.nodes if isinstance(grid, ScaleGrid) else np.asarray(grid, dtype=float)
        bad = monotonicity_violations(kernel, rhos, L)
        if bad:
            l0, r0 = bad[0]
            raise ValueError(f"kernel coefficients not nonincreasing: l={l0}, rho={r0:.6g} ({len(bad)} violations)")

    def coeffs(rho, l):
        l = np.asarray(l)
        k = kernel.coefficients(rho, l)
        disc = -2.0 * np.real(np.conj(k) * kernel.derivative(rho, l)) / float(a(np.array(rho)))
        scale = np.abs(k) ** 2 / rho + 1e-300
        neg = disc < -1e-10 * scale
        if np.any(neg):
            j = int(np.asarray(l).ravel()[np.flatnonzero(np.ravel(neg))[0]])
            raise ValueError(f"negative discriminant at l={j}, rho={rho:.6g}: kernel not monotone")
        return np.sqrt(np.maximum(disc, 0.0))

    def scaling(R, l):
        k = np.abs(kernel.coefficients(R, l)) ** 2 - np.abs(kernel_limit(kernel, l)) ** 2
        return np.sqrt(np.maximum(k, 0.0))

    probe = [coeffs(r, np.array([0]))[0] for r in (1e-3, 1.0, 1e3)]
    order = 0 if max(probe) == 0 else -1
    return WaveletFamily(kernel.dim, coeff_fn=coeffs, label=label or f"wavelet[{kernel.label}]", order=order,
                         scaling_fn=scaling, alpha=alpha, meta={"kernel": kernel.label})


def abel_poisson_wavelet(dim) -> WaveletFamily:
    """Psi^(l) = (lam+l)/lam sqrt(2 l rho) e^(-l rho)."""
    dim = as_dim(dim)
    lam = dim.lam
    psi = lambda t: np.sqrt(2.0 * t) * np.exp(-t)  # noqa: E731

    def coeffs(rho, l):
        return (lam + l) / lam * psi(l * rho)

    def scaling(R, l):
        return np.where(l == 0, 0.0, (lam + l) / lam * np.exp(-l * R))

    return WaveletFamily(dim, coeff_fn=coeffs, label="abel-poisson-wavelet", psi=psi, order=0,
                         scaling_fn=scaling, euclid={"psi": psi, "scale": "rho"})


def gauss_weierstrass_wavelet(dim) -> WaveletFamily:
    """Psi^(l) = (lam+l)/lam sqrt(2 l(l+2 lam) rho) e^(-l(l+2 lam) rho)."""
    dim = as_dim(dim)
    lam = dim.lam

    def coeffs(rho, l):
        b = l * (l + 2 * lam)
        return (lam + l) / lam * np.sqrt(2.0 * b * rho) * np.exp(-b * rho)

    def scaling(R, l):
        b = l * (l + 2 * lam)
        return np.where(l == 0, 0.0, (lam + l) / lam * np.exp(-b * R))

    # with rho = s^2 the coefficients approach sqrt(2) (l s) e^(-(l s)^2)
    euclid = {"psi": lambda t: math.sqrt(2.0) * t * np.exp(-t * t), "scale": "sqrt"}
    return WaveletFamily(dim, coeff_fn=coeffs, label="gauss-weierstrass-wavelet", order=0,
                         scaling_fn=scaling, euclid=euclid)


# --------------------------------------------------------------------------
# nonzonal wavelets from admissible weight vectors


class WeightVectors:
    """Per-degree weight vectors w_l in C^N(n,l) with sum_k |w_l(k)|^2 = N(n,l).

    ``weights`` is either a mapping l -> vector (scale independent) or a
    callable (rho, l) -> vector (scale dependent); the latter is validated at
    every evaluation. Entry k follows the order of ``multi_indices(n, l)``,
    whose first element is the zonal index.
    """

    TOL = 1e-12

    def __init__(self, dim, L: int, weights):
        self.dim = as_dim(dim)
        self.L = int(L)
        if callable(weights):
            self._fn = weights
            self._table = None
        else:
            self._fn = None
            self._table = {}
            for l in range(self.L + 1):
                self._table[l] = self._validate(l, weights[l])

    @property
    def scale_dependent(self) -> bool:
        return self._fn is not None

    def _validate(self, l, w):
        w = np.asarray(w, dtype=complex).ravel()
        N = harmonic_dimension(self.dim.n, l)
        if w.size != N:
            raise ValueError(f"weight vector for l={l} has length {w.size}, expected N={N}")
        s = float(np.sum(np.abs(w) ** 2))
        if abs(s - N) > self.TOL * N:
            raise ValueError(f"inadmissible weights at l={l}: sum |w|^2 = {s!r}, expected {N}")
        return w

    def at(self, l: int, rho: float | None = None) -> np.ndarray:
        if self._fn is None:
            return self._table[l]
        return self._validate(l, self._fn(rho, l))

    @classmethod
    def zonal(cls, dim, L):
        dim = as_dim(dim)
        tab = {}
        for l in range(L + 1):
            w = np.zeros(harmonic_dimension(dim.n, l), dtype=complex)
            w[0] = math.sqrt(w.size)
            tab[l] = w
        return cls(dim, L, tab)

    @classmethod
    def equal(cls, dim, L):
        dim = as_dim(dim)
        return cls(dim, L, {l: np.ones(harmonic_dimension(dim.n, l)) for l in range(L + 1)})

    @classmethod
    def random(cls, dim, L, rng=None):
        rng = np.random.default_rng(rng)
        dim = as_dim(dim)
        tab = {}
        for l in range(L + 1):
            N = harmonic_dimension(dim.n, l)
            v = rng.normal(size=N) + 1j * rng.normal(size=N)
            tab[l] = v * math.sqrt(N) / np.linalg.norm(v)
        return cls(dim, L, tab)

    @classmethod
    def normalized(cls, dim, L, fn):
        """Scale-dependent weights from an arbitrary nonzero fn(rho, l), rescaled per rho."""
        dim = as_dim(dim)

        def w(rho, l):
            v = np.asarray(fn(rho, l), dtype=complex)
            return v * math.sqrt(harmonic_dimension(dim.n, l)) / np.linalg.norm(v)

        return cls(dim, L, w)


def nonzonal_from_weights(kernel: KernelFamily, weights: WeightVectors, alpha: str = "1/rho",
                          label: str | None = None) -> WaveletFamily:
    """a_l^k(Psi_rho) = Psi_zonal^(l) lam/(lam+l) w_l(k), with Psi_zonal from the kernel."""
    if kernel.dim != weights.dim:
        raise ValueError("kernel and weights live on different spheres")
    zon = wavelet_from_kernel(kernel, alpha)
    lam = kernel.lam
    n = kernel.dim.n
    Lw = weights.L

    def harmonic(rho, L):
        if L > Lw:
            raise ValueError(f"weights only given up to degree {Lw}")
        keys, _ = _full_index(n, L)
        z = zon.coefficients(rho, np.arange(L + 1)) * lam / (lam + np.arange(L + 1))
        vals = np.concatenate([z[l] * weights.at(l, rho) for l in range(L + 1)])
        return HarmonicSpectrum(kernel.dim, keys, vals, L, validate=False)

    # sum_k |w_l(k)|^2 = N(n, l), so every degree carries the zonal energy
    # and the scaling function is that of the zonal wavelet
    return WaveletFamily(kernel.dim, harmonic_fn=harmonic, label=label or f"nonzonal[{kernel.label}]",
                         order=zon.order, alpha=alpha, scaling_fn=zon.scaling_fn,
                         meta={"kernel": kernel.label, "max_degree": Lw,
                               "scale_dependent_weights": weights.scale_dependent})


def xi_approximate_identity(fam: WaveletFamily, tol: float = 1e-3, L: int = 16, grid=None):
    """Check that the completed Xi_R is an approximate identity as R -> 0."""
    sf = ScalingFunction(fam, fam.alpha, completed=True)
    rhos = log_grid(1e-3, 1e2, 26) if grid is None else grid
    return check_approximate_identity(sf.xi_family(), rhos, tol, L)


__all__ = [
    "WaveletFamily", "ScalingFunction", "scaling_function", "generating_function_admissibility",
    "AdmissibilityReport", "check_bilinear_admissibility", "TransformField", "bilinear_transform",
    "bilinear_synthesize", "isometry_check", "relative_error", "wavelet_from_kernel", "abel_poisson_wavelet",
    "gauss_weierstrass_wavelet", "WeightVectors", "nonzonal_from_weights", "monotonicity_violations",
    "xi_approximate_identity", "summability",
]
