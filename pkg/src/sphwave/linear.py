"""Linear spherical wavelets.

The admissibility condition is on the first power of the coefficients,

    A_l^0 int_0^inf a_l^0(Psi_rho) alpha(rho) d rho = (lam+l)/lam,

and the reconstruction is a plain scale integral of the transform, with no
second wavelet. Only the a_l^0 column matters for the reconstruction; it
defines the zonal kernel Upsilon_rho.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .bilinear import (
    AdmissibilityReport,
    TransformField,
    WaveletFamily,
    _check_grid,
    _sup_l1,
    _tail_integral,
    _transform,
    default_R_grid,
    kernel_limit,
)
from .kernels import KernelFamily, check_approximate_identity
from .scales import ScaleGrid, alpha_function, log_grid
from .specfun import as_dim, harmonic_dimension, zonal_norm_constant
from .zonal import DEFAULT_L, HarmonicSpectrum, ZonalSpectrum, _full_index


@dataclass(frozen=True)
class LinearWaveletFamily(WaveletFamily):
    kind = "linear"

    def upsilon(self, rho, l):
        """Gegenbauer coefficients of the reproducing kernel, A_l^0 a_l^0(Psi_rho)."""
        l = np.asarray(l)
        if self.is_zonal:
            return self.coefficients(rho, l)
        L = int(l.max()) if l.size else 0
        h = self.harmonic_fn(float(rho), L)
        zero = (0,) * (self.dim.n - 1)
        a0 = np.array([h[(int(j), zero)] for j in np.ravel(l)]).reshape(l.shape)
        return zonal_norm_constant(self.dim.n, l) * a0


def reproducing_kernel_linear(fam: LinearWaveletFamily, rho, L: int = DEFAULT_L) -> ZonalSpectrum:
    """Upsilon_rho: the rotation average of Psi_rho about the pole, a zonal function."""
    return ZonalSpectrum(fam.dim, fam.upsilon(rho, np.arange(L + 1)))


@dataclass(frozen=True)
class LinearScalingFunction:
    """R -> Phi_R^L with Phi_R^L(l) = int_R^inf Upsilon_rho^(l) alpha d rho."""

    family: LinearWaveletFamily
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
            out = np.asarray(fam.scaling_fn(float(R), l), dtype=complex) * np.ones(l.shape)
        else:
            out = _tail_integral(lambda r: fam.upsilon(r, l), R, self.alpha).astype(complex)
        if self.completed and fam.order >= 0:
            out = np.where(l <= fam.order, (lam + l) / lam, out)
        return out

    def spectrum(self, R, L: int = DEFAULT_L) -> ZonalSpectrum:
        return ZonalSpectrum(self.dim, self.coefficients(R, np.arange(L + 1)))

    def kernel_family(self) -> KernelFamily:
        return KernelFamily(self.dim, self.coefficients, f"linear-scaling[{self.family.label}]")


def linear_scaling_function(fam: LinearWaveletFamily, alpha: str = "1/rho",
                            completed: bool = False) -> LinearScalingFunction:
    return LinearScalingFunction(fam, alpha, completed)


def check_linear_admissibility(fam: LinearWaveletFamily, grid: ScaleGrid | None = None, tol: float = 1e-6,
                               L: int = 16, R_grid=None, bound: float | None = None) -> AdmissibilityReport:
    """First-moment condition per degree l in (order, L]; L1 bound of Phi_R^L on an R grid."""
    grid = grid or ScaleGrid(alpha=fam.alpha)
    lam = fam.lam
    notes = []
    if not fam.is_zonal and "max_degree" in fam.meta and L > fam.meta["max_degree"]:
        L = int(fam.meta["max_degree"])
        notes.append(f"degrees limited to {L} by the supplied coefficients")
    l = np.arange(max(fam.order + 1, 0), L + 1)
    vals = np.array([fam.upsilon(r, l) for r in grid.nodes])
    integrals = grid.integrate(vals)
    targets = (lam + l) / lam
    resid = np.abs(integrals - targets)
    if np.any(np.abs(integrals.imag) > tol * np.abs(integrals)):
        notes.append("scale integral of the coefficients is not real")
    ends = grid.weights[[0, -1], None] * np.abs(vals[[0, -1]])
    tail = float(np.max(ends.sum(axis=0) / np.maximum(np.abs(integrals), 1e-300))) if l.size else 0.0
    if tail > tol:
        notes.append(f"grid ends carry {tail:.2e} of the integral; widen the scale range")
    if not fam.is_zonal:
        notes.append("condition 2 evaluated on the rotation-averaged kernel Phi_R^L")
    Rs = default_R_grid() if R_grid is None else np.asarray(R_grid, dtype=float)
    norms, sup, at, more = _sup_l1(LinearScalingFunction(fam, grid.alpha).kernel_family(), Rs)
    notes += more
    return AdmissibilityReport("linear", fam.label, fam.dim.n, fam.order, [int(j) for j in l],
                               [float(x) for x in integrals.real], [float(x) for x in targets],
                               [float(x) for x in resid], tol, grid.describe(), tail,
                               [float(x) for x in Rs], norms, sup, at, bound, None, notes)


def linear_transform(f: HarmonicSpectrum, fam: LinearWaveletFamily, grid: ScaleGrid | None = None) -> TransformField:
    """W^L f(rho, .) = f * conj(Psi_rho^L), spectrally (zonal families)."""
    return _transform(f, fam, grid or ScaleGrid(alpha=fam.alpha), "linear")


def linear_reconstruct(field_: TransformField, fam: LinearWaveletFamily,
                       grid: ScaleGrid | None = None) -> HarmonicSpectrum:
    """f = int W^L f(rho, .) alpha d rho (no second wavelet, no 1/Sigma_n)."""
    grid = grid or ScaleGrid(alpha=fam.alpha)
    _check_grid(field_, grid)
    return HarmonicSpectrum(field_.dim, field_.keys, grid.integrate(field_.values), field_.L, validate=False)


def reconstruction_multiplier(fam: LinearWaveletFamily, grid: ScaleGrid | None = None, L: int = 32) -> np.ndarray:
    """Per-degree factor lam/(lam+l) int conj(Upsilon_rho^(l)) alpha d rho mapping f to its reconstruction.

    For nonzonal families this realises the rotation average spectrally.
    """
    grid = grid or ScaleGrid(alpha=fam.alpha)
    lam = fam.lam
    l = np.arange(L + 1)
    vals = np.array([fam.upsilon(r, l) for r in grid.nodes])
    return lam / (lam + l) * grid.integrate(np.conj(vals))


# --------------------------------------------------------------------------
# construction from kernels and the catalogue


def linear_wavelet_from_kernel(kernel: KernelFamily, alpha: str = "1/rho",
                               label: str | None = None) -> LinearWaveletFamily:
    """Psi^(l) = -(1/alpha(rho)) d/d rho K_rho^(l). No monotonicity needed."""
    a = alpha_function(alpha)

    def coeffs(rho, l):
        return -kernel.derivative(rho, l) / float(a(np.array(rho)))

    def scaling(R, l):
        return kernel.coefficients(R, l) - kernel_limit(kernel, l)

    probe = [coeffs(r, np.array([0]))[0] for r in (1e-3, 1.0, 1e3)]
    order = 0 if max(abs(p) for p in probe) == 0 else -1
    return LinearWaveletFamily(kernel.dim, coeff_fn=coeffs, label=label or f"linear[{kernel.label}]",
                               order=order, scaling_fn=scaling, alpha=alpha, meta={"kernel": kernel.label})


def poisson_multipole(dim, rho: float, d: int, L: int = DEFAULT_L) -> ZonalSpectrum:
    """(1/Gamma(d)) (lam+l)/lam (rho l)^d e^(-rho l)."""
    return poisson_multipole_family(dim, d).spectrum(rho, L)


def poisson_multipole_family(dim, d: int) -> LinearWaveletFamily:
    if d < 1:
        raise ValueError("multipole order d must be >= 1")
    dim = as_dim(dim)
    lam = dim.lam
    g = math.gamma(d)

    def psi(t):
        return t ** d * np.exp(-t) / g

    def coeffs(rho, l):
        return (lam + l) / lam * psi(rho * l)

    def scaling(R, l):
        # int_R^inf (l rho)^d e^(-l rho) d rho / rho = Gamma(d, l R)
        x = np.asarray(l, dtype=float) * R
        return np.where(np.asarray(l) == 0, 0.0, (lam + l) / lam * special.gammaincc(d, x))

    return LinearWaveletFamily(dim, coeff_fn=coeffs, label=f"poisson-multipole:{d}", psi=psi, order=0,
                               scaling_fn=scaling, euclid={"psi": psi, "scale": "rho"})


def gauss_weierstrass_linear_family(dim) -> LinearWaveletFamily:
    """(lam+l)/lam l(l+2 lam) rho e^(-l(l+2 lam) rho)."""
    dim = as_dim(dim)
    lam = dim.lam

    def coeffs(rho, l):
        b = l * (l + 2 * lam)
        return (lam + l) / lam * b * rho * np.exp(-b * rho)

    def scaling(R, l):
        b = l * (l + 2 * lam)
        return np.where(np.asarray(l) == 0, 0.0, (lam + l) / lam * np.exp(-b * R))

    return LinearWaveletFamily(dim, coeff_fn=coeffs, label="gauss-weierstrass-linear", order=0,
                               scaling_fn=scaling,
                               euclid={"psi": lambda t: t * t * np.exp(-t * t), "scale": "sqrt"})


def mexican_needlet(dim, rho: float, r: int, variant: str = "bilinear", L: int = DEFAULT_L) -> ZonalSpectrum:
    return mexican_needlet_family(dim, r, variant).spectrum(rho, L)


def mexican_needlet_family(dim, r: int, variant: str = "bilinear") -> WaveletFamily:
    """factor (rho^2 l(l+2 lam))^r e^(-rho^2 l(l+2 lam)) (lam+l)/lam.

    The factor is 2^r sqrt(2/Gamma(2r)) for the bilinear variant and
    2/Gamma(r) for the linear one; both make the respective condition exact
    for alpha = 1/rho.
    """
    if int(r) != r or r < 1:
        raise ValueError("needlet order r must be an integer >= 1")
    r = int(r)
    dim = as_dim(dim)
    lam = dim.lam
    if variant == "bilinear":
        factor = 2.0 ** r * math.sqrt(2.0 / math.gamma(2 * r))
        cls = WaveletFamily
    elif variant == "linear":
        factor = 2.0 / math.gamma(r)
        cls = LinearWaveletFamily
    else:
        raise ValueError(f"variant must be 'bilinear' or 'linear', got {variant!r}")

    def coeffs(rho, l):
        u = rho * rho * l * (l + 2 * lam)
        return factor * u ** r * np.exp(-u) * (lam + l) / lam

    def scaling(R, l):
        u = R * R * np.asarray(l, dtype=float) * (np.asarray(l) + 2 * lam)
        zero = np.asarray(l) == 0
        if variant == "bilinear":
            # int_u^inf s^(2r-1) e^(-2s) ds * factor^2 / 2, then the square root
            val = np.sqrt(special.gammaincc(2 * r, 2 * u))
        else:
            val = special.gammaincc(r, u)
        return np.where(zero, 0.0, (lam + l) / lam * val)

    # for small rho the coefficients approach (lam+l)/lam psi_e(l rho)
    psi_e = lambda t: factor * t ** (2 * r) * np.exp(-t * t)  # noqa: E731
    return cls(dim, coeff_fn=coeffs, label=f"mexican-needlet:{r}:{variant}", order=0, scaling_fn=scaling,
               euclid={"psi": psi_e, "scale": "rho"})


def nonzonal_linear(column: LinearWaveletFamily, extra, max_degree: int,
                    label: str | None = None) -> LinearWaveletFamily:
    """Nonzonal linear wavelet from an admissible zonal column plus free coefficients.

    ``column`` fixes a_l^0 = Psi^(l) / A_l^0. ``extra(rho, l)`` returns the
    remaining N(n,l) - 1 coefficients for degree l, in multi-index order.
    """
    if not column.is_zonal:
        raise TypeError("the column family must be zonal")
    dim = column.dim
    n = dim.n

    def harmonic(rho, L):
        if L > max_degree:
            raise ValueError(f"coefficients only given up to degree {max_degree}")
        keys, _ = _full_index(n, L)
        z = column.coefficients(rho, np.arange(L + 1)) / zonal_norm_constant(n, np.arange(L + 1))
        parts = []
        for l in range(L + 1):
            rest = np.asarray(extra(rho, l), dtype=complex).ravel()
            if rest.size != harmonic_dimension(n, l) - 1:
                raise ValueError(f"degree {l} needs {harmonic_dimension(n, l) - 1} extra coefficients")
            parts.append(np.concatenate([[z[l]], rest]))
        return HarmonicSpectrum(dim, keys, np.concatenate(parts), L, validate=False)

    return LinearWaveletFamily(dim, harmonic_fn=harmonic, label=label or f"nonzonal[{column.label}]",
                               order=column.order, scaling_fn=column.scaling_fn, alpha=column.alpha,
                               meta={"max_degree": max_degree})


def linear_scaling_approximate_identity(fam: LinearWaveletFamily, tol: float = 1e-3, L: int = 16, grid=None):
    """Check that the completed linear scaling function is an approximate identity as R -> 0."""
    sf = LinearScalingFunction(fam, fam.alpha, completed=True)
    rhos = log_grid(1e-3, 1e2, 26) if grid is None else grid
    return check_approximate_identity(sf.kernel_family(), rhos, tol, L)


__all__ = [
    "LinearWaveletFamily", "LinearScalingFunction", "linear_scaling_function", "reproducing_kernel_linear",
    "check_linear_admissibility", "linear_transform", "linear_reconstruct", "reconstruction_multiplier",
    "linear_wavelet_from_kernel", "poisson_multipole", "poisson_multipole_family",
    "gauss_weierstrass_linear_family", "mexican_needlet", "mexican_needlet_family", "nonzonal_linear",
    "linear_scaling_approximate_identity",
]
