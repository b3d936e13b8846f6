"""Named families and JSON family files.

Names:
    abel-poisson, gauss-weierstrass               kernels (approximate identities)
    abel-poisson-wavelet, gauss-weierstrass-wavelet  bilinear wavelets
    gauss-weierstrass-linear, poisson-multipole:d    linear wavelets
    mexican-needlet:r:bilinear|linear

A family file is a JSON object with a "type" ("abel-poisson",
"gauss-weierstrass", "tabulated", "dilated", "catalog" or "psi") and, for
wavelets built from a kernel, {"construction": "from-kernel", "kind":
"bilinear"|"linear", "alpha": "1/rho"}.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

from .bilinear import WaveletFamily, abel_poisson_wavelet, gauss_weierstrass_wavelet, wavelet_from_kernel
from .dilation import dilation_family
from .euclid import generating_family, tabulated_psi
from .kernels import KernelFamily, abel_poisson_family, gauss_weierstrass_family, tabulated_family
from .linear import (
    LinearWaveletFamily,
    gauss_weierstrass_linear_family,
    linear_wavelet_from_kernel,
    mexican_needlet_family,
    poisson_multipole_family,
)
from .scales import ALPHAS


class CatalogError(ValueError):
    """Unknown family name or malformed family description."""


@dataclass(frozen=True)
class Entry:
    pattern: str
    kind: str  # kernel | bilinear | linear
    formula: str


ENTRIES = [
    Entry("abel-poisson", "kernel", "(lam+l)/lam e^(-l rho)"),
    Entry("gauss-weierstrass", "kernel", "(lam+l)/lam e^(-l(l+2 lam) rho)"),
    Entry("abel-poisson-wavelet", "bilinear", "(lam+l)/lam sqrt(2 l rho) e^(-l rho)"),
    Entry("gauss-weierstrass-wavelet", "bilinear", "(lam+l)/lam sqrt(2 l(l+2 lam) rho) e^(-l(l+2 lam) rho)"),
    Entry("gauss-weierstrass-linear", "linear", "(lam+l)/lam l(l+2 lam) rho e^(-l(l+2 lam) rho)"),
    Entry("poisson-multipole:d", "linear", "(1/Gamma(d)) (lam+l)/lam (rho l)^d e^(-rho l), d >= 1"),
    Entry("mexican-needlet:r:bilinear", "bilinear",
          "2^r sqrt(2/Gamma(2r)) (rho^2 l(l+2 lam))^r e^(-rho^2 l(l+2 lam)) (lam+l)/lam"),
    Entry("mexican-needlet:r:linear", "linear",
          "(2/Gamma(r)) (rho^2 l(l+2 lam))^r e^(-rho^2 l(l+2 lam)) (lam+l)/lam"),
]

KERNELS: dict[str, Callable] = {"abel-poisson": abel_poisson_family, "gauss-weierstrass": gauss_weierstrass_family}


def listing() -> list[dict]:
    return [{"name": e.pattern, "kind": e.kind, "coefficients": e.formula} for e in ENTRIES]


def _int_param(text: str, what: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise CatalogError(f"{what} must be an integer, got {text!r}") from None
    if v < 1:
        raise CatalogError(f"{what} must be >= 1, got {v}")
    return v


def family_kind(fam) -> str:
    if isinstance(fam, KernelFamily):
        return "kernel"
    return "linear" if isinstance(fam, LinearWaveletFamily) else "bilinear"


def by_name(name: str, n: int):
    """Resolve a catalog name on S^n to a KernelFamily or a wavelet family."""
    name = name.strip()
    if name in KERNELS:
        return KERNELS[name](n)
    if name == "abel-poisson-wavelet":
        return abel_poisson_wavelet(n)
    if name == "gauss-weierstrass-wavelet":
        return gauss_weierstrass_wavelet(n)
    if name == "gauss-weierstrass-linear":
        return gauss_weierstrass_linear_family(n)
    parts = name.split(":")
    if parts[0] == "poisson-multipole":
        if len(parts) != 2:
            raise CatalogError("expected poisson-multipole:d")
        return poisson_multipole_family(n, _int_param(parts[1], "multipole order d"))
    if parts[0] == "mexican-needlet":
        if len(parts) != 3 or parts[2] not in ("bilinear", "linear"):
            raise CatalogError("expected mexican-needlet:r:bilinear or mexican-needlet:r:linear")
        return mexican_needlet_family(n, _int_param(parts[1], "needlet order r"), parts[2])
    known = ", ".join(e.pattern for e in ENTRIES)
    raise CatalogError(f"unknown family {name!r}; known: {known}")


# --------------------------------------------------------------------------
# family files


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise CatalogError(f"{where}: missing field {key!r}")
    return obj[key]


def _complex_list(values, where):
    out = []
    for v in values:
        if isinstance(v, (list, tuple)) and len(v) == 2:
            out.append(complex(float(v[0]), float(v[1])))
        elif isinstance(v, (int, float)):
            out.append(complex(v))
        else:
            raise CatalogError(f"{where}: coefficients must be numbers or [re, im] pairs")
    return out


def kernel_from_spec(spec: dict, n: int, where: str = "family") -> KernelFamily:
    kind = _require(spec, "type", where)
    if kind in KERNELS:
        return KERNELS[kind](n)
    if kind == "tabulated":
        rows = _require(spec, "table", where)
        if not rows:
            raise CatalogError(f"{where}.table: empty")
        rhos, table = [], []
        for i, row in enumerate(rows):
            rhos.append(float(_require(row, "rho", f"{where}.table[{i}]")))
            table.append(_complex_list(_require(row, "coeffs", f"{where}.table[{i}]"), f"{where}.table[{i}]"))
        if min(rhos) <= 0:
            raise CatalogError(f"{where}.table: scales must be positive")
        return tabulated_family(n, rhos, table, spec.get("label", "tabulated"))
    if kind == "dilated":
        profile = _require(spec, "profile", where)
        base = kernel_from_spec(profile, n, f"{where}.profile")
        rho0 = float(_require(profile, "rho", f"{where}.profile"))
        return dilation_family(lambda t: base.values(rho0, t), n)
    raise CatalogError(f"{where}: unknown kernel type {kind!r}")


def family_from_spec(spec: dict, n: int):
    """Build a family from a parsed family file; n may be overridden by spec["n"]."""
    if not isinstance(spec, dict):
        raise CatalogError("family file must hold a JSON object")
    n = int(spec.get("n", n))
    kind = _require(spec, "type", "family")
    if kind == "catalog":
        return by_name(_require(spec, "name", "family"), n)
    if kind == "psi":
        psi_spec = _require(spec, "psi", "family")
        psi = tabulated_psi(_require(psi_spec, "t", "family.psi"), _require(psi_spec, "values", "family.psi"))
        fam = generating_family(n, psi, spec.get("label", "psi-wavelet"))
        if spec.get("kind", "bilinear") == "linear":
            fam = LinearWaveletFamily(fam.dim, coeff_fn=fam.coeff_fn, label=fam.label, psi=psi, euclid=fam.euclid)
        return fam
    kernel = kernel_from_spec(spec, n)
    construction = spec.get("construction")
    if construction is None:
        return kernel
    if construction != "from-kernel":
        raise CatalogError(f"family: unknown construction {construction!r}")
    alpha = spec.get("alpha", "1/rho")
    if alpha not in ALPHAS:
        raise CatalogError(f"family.alpha: unknown weight {alpha!r}; known: {sorted(ALPHAS)}")
    wkind = spec.get("kind", "bilinear")
    if wkind == "bilinear":
        return wavelet_from_kernel(kernel, alpha)
    if wkind == "linear":
        return linear_wavelet_from_kernel(kernel, alpha)
    raise CatalogError(f"family.kind: expected 'bilinear' or 'linear', got {wkind!r}")


def load_family_file(path, n: int):
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise CatalogError(f"{path}: {exc.strerror}") from None
    return family_from_spec(spec, n)


def describe(fam) -> dict:
    out = {"label": fam.label, "kind": family_kind(fam), "n": fam.dim.n}
    if isinstance(fam, WaveletFamily):
        out["order"] = fam.order
        out["zonal"] = fam.is_zonal
    return out


__all__ = ["CatalogError", "ENTRIES", "listing", "by_name", "family_from_spec", "kernel_from_spec",
           "load_family_file", "family_kind", "describe"]
