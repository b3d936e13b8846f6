"""Spectral representation of functions on S^n.

Zonal functions are stored densely by their Gegenbauer coefficients
g(l), so that g(t) = sum_l g(l) C_l^lam(t). General square-integrable
functions are stored by Fourier coefficients a_l^k against the
hyperspherical harmonics Y_l^k, orthonormal for the normalised inner
product <f, g> = (1/Sigma_n) int conj(f) g d sigma.

The bridge between the two pictures is g(l) = A_l^0 a_l^0(g).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special

from .specfun import (
    QuadratureRule,
    SphereDim,
    as_dim,
    gauss_gegenbauer,
    gegenbauer,
    gegenbauer_norm_constant,
    gegenbauer_sum,
    gegenbauer_table,
    harmonic_dimension,
    zonal_norm_constant,
)

DEFAULT_L = 64


# --------------------------------------------------------------------------
# multi-indices and normalisation constants


@lru_cache(maxsize=None)
def multi_indices(n: int, l: int) -> tuple[tuple[int, ...], ...]:
    """Enumerate M_{n-1}(l): l >= k_1 >= ... >= |k_{n-1}|, last entry signed.

    The zonal index (0, ..., 0) always comes first.
    """
    if n < 2 or l < 0:
        raise ValueError("need n >= 2 and l >= 0")

    def rec(upper, depth):
        if depth == 1:
            vals = [0] + [s * j for j in range(1, upper + 1) for s in (1, -1)]
            return [(v,) for v in vals]
        out = []
        for k in range(upper + 1):
            out.extend((k,) + tail for tail in rec(k, depth - 1))
        return out

    return tuple(rec(l, n - 1))


@dataclass(frozen=True)
class MultiIndexSet:
    n: int
    l: int

    @property
    def indices(self):
        return multi_indices(self.n, self.l)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


@lru_cache(maxsize=None)
def harmonic_norm_constant(n: int, l: int, k: tuple[int, ...]) -> float:
    """A_l^k for the product-form harmonic basis (orthonormal, normalised measure)."""
    ks = (l,) + tuple(abs(x) for x in k)
    if len(ks) != n:
        raise ValueError(f"multi-index of length {len(k)} does not fit S^{n}")
    log_sq = -special.gammaln((n + 1) / 2.0)
    for tau in range(1, n):
        kp, kt = ks[tau - 1], ks[tau]
        log_sq += ((n - tau + 2 * kt - 2) * math.log(2.0) + special.gammaln(kp - kt + 1.0)
                   + math.log(n - tau + 2 * kp) + 2.0 * special.gammaln((n - tau) / 2.0 + kt)
                   - 0.5 * math.log(math.pi) - special.gammaln(n - tau + kp + kt))
    return float(math.exp(0.5 * log_sq))


@dataclass(frozen=True)
class HarmonicNormalizer:
    """Table of A_l^k for all multi-indices up to degree L."""

    n: int
    L: int

    def __call__(self, l: int, k: tuple[int, ...]) -> float:
        return harmonic_norm_constant(self.n, l, tuple(k))

    def table(self):
        return {(l, k): self(l, k) for l in range(self.L + 1) for k in multi_indices(self.n, l)}


def harmonic_Y(n: int, l: int, k: tuple[int, ...], angles) -> np.ndarray:
    """Spatial values of Y_l^k on S^2 or S^3 (test utility).

    ``angles`` is a tuple of arrays (theta_1, ..., theta_{n-1}, phi).
    """
    if n > 3:
        raise NotImplementedError("spatial harmonics are provided for n <= 3 only")
    ks = (l,) + tuple(abs(x) for x in k)
    *thetas, phi = angles
    val = harmonic_norm_constant(n, l, tuple(k)) * np.ones_like(np.asarray(phi, dtype=float), dtype=complex)
    for tau in range(1, n):
        lam_tau = (n - tau) / 2.0 + ks[tau]
        th = np.asarray(thetas[tau - 1], dtype=float)
        val = val * gegenbauer(ks[tau - 1] - ks[tau], lam_tau, np.cos(th)) * np.sin(th) ** ks[tau]
    sign = 1 if k[-1] >= 0 else -1
    return val * np.exp(1j * sign * abs(k[-1]) * np.asarray(phi, dtype=float))


# --------------------------------------------------------------------------
# zonal spectra


@dataclass(frozen=True)
class ZonalSpectrum:
    """Gegenbauer coefficients g(0..L) of a zonal function on S^n."""

    dim: SphereDim
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dim", as_dim(self.dim))
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if c.ndim != 1 or c.size == 0:
            raise ValueError("need a nonempty 1-d coefficient array")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def L(self) -> int:
        return self.coeffs.size - 1

    @property
    def lam(self) -> float:
        return self.dim.lam

    @classmethod
    def zeros(cls, dim, L):
        return cls(dim, np.zeros(L + 1))

    def __call__(self, t):
        return evaluate(self, t)

    def truncate(self, L):
        if L <= self.L:
            return ZonalSpectrum(self.dim, self.coeffs[: L + 1])
        return ZonalSpectrum(self.dim, np.concatenate([self.coeffs, np.zeros(L - self.L)]))

    def _binary(self, other, op):
        if not isinstance(other, ZonalSpectrum):
            return NotImplemented
        _same_dim(self.dim, other.dim)
        L = max(self.L, other.L)
        return ZonalSpectrum(self.dim, op(self.truncate(L).coeffs, other.truncate(L).coeffs))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, s):
        return ZonalSpectrum(self.dim, self.coeffs * s)

    __rmul__ = __mul__

    def conj(self):
        return ZonalSpectrum(self.dim, np.conj(self.coeffs))

    def to_json(self):
        return {"n": self.dim.n, "L": self.L,
                "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        c = np.array([complex(re, im) for re, im in obj["coeffs"]])
        if "L" in obj and int(obj["L"]) != c.size - 1:
            raise ValueError("'L' does not match the number of coefficients")
        return cls(SphereDim(obj["n"]), c)


@dataclass(frozen=True)
class ZonalSamples:
    """Values of a zonal function at the nodes of a Gauss-Gegenbauer rule."""

    dim: SphereDim
    rule: QuadratureRule
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dim", as_dim(self.dim))
        v = np.asarray(self.values, dtype=complex)
        if v.shape != self.rule.nodes.shape:
            raise ValueError("values and quadrature nodes differ in length")
        if abs(self.rule.lam - self.dim.lam) > 1e-14:
            raise ValueError("quadrature weight does not match the sphere dimension")
        object.__setattr__(self, "values", v)

    @classmethod
    def sample(cls, func: Callable, dim, m: int):
        dim = as_dim(dim)
        rule = gauss_gegenbauer(dim.lam, m)
        return cls(dim, rule, func(rule.nodes))

    @property
    def nodes(self):
        return self.rule.nodes


def _same_dim(a: SphereDim, b: SphereDim):
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: S^{a.n} vs S^{b.n}")


def default_order(L: int) -> int:
    return L + 8


def coefficients_from_samples(f: ZonalSamples, L: int | None = None) -> ZonalSpectrum:
    """g(l) = c(l, lam) int f C_l (1-t^2)^(lam-1/2) dt, by the sample rule."""
    lam = f.dim.lam
    if L is None:
        L = f.rule.order - 8 if f.rule.order > 8 else f.rule.order - 1
    if f.rule.order < L + 1:
        warnings.warn(f"rule with {f.rule.order} nodes cannot resolve degree {L}; "
                      "coefficients are truncation-limited", RuntimeWarning, stacklevel=2)
    C = gegenbauer_table(L, lam, f.rule.nodes)
    raw = C @ (f.rule.weights * f.values)
    return ZonalSpectrum(f.dim, gegenbauer_norm_constant(np.arange(L + 1), lam) * raw)


def project(func: Callable, dim, L: int, m: int | None = None) -> ZonalSpectrum:
    """Gegenbauer coefficients of a callable zonal function up to degree L."""
    samples = ZonalSamples.sample(func, dim, m or default_order(L))
    return coefficients_from_samples(samples, L)


def evaluate(spec: ZonalSpectrum, t):
    """sum_l g(l) C_l^lam(t) by Clenshaw summation."""
    return gegenbauer_sum(spec.coeffs, spec.lam, t)


# --------------------------------------------------------------------------
# general spectra


@lru_cache(maxsize=None)
def _full_index(n: int, L: int):
    keys = tuple((l, k) for l in range(L + 1) for k in multi_indices(n, l))
    return keys, {key: i for i, key in enumerate(keys)}


class HarmonicSpectrum:
    """Fourier coefficients a_l^k of a function on S^n, stored sparsely.

    Keys are (l, k) with k in M_{n-1}(l). Only listed keys are stored; the
    values live in a single complex array so that per-degree arithmetic is
    vectorised.
    """

    __slots__ = ("dim", "L", "keys", "values", "_degrees", "_pos")

    def __init__(self, dim, keys, values, L: int | None = None, validate: bool = True):
        self.dim = as_dim(dim)
        if validate:
            keys = tuple((int(l), tuple(int(x) for x in k)) for l, k in keys)
        values = np.array(values, dtype=complex).reshape(len(keys))
        n = self.dim.n
        for l, k in (keys if validate else ()):
            if len(k) != n - 1:
                raise ValueError(f"multi-index {k} has wrong length for S^{n}")
            seq = (l,) + k[:-1] + (abs(k[-1]),)
            if any(a < b for a, b in zip(seq, seq[1:])) or min(seq) < 0:
                raise ValueError(f"({l}, {k}) is not an admissible multi-index")
        self.keys = keys
        self.values = values
        self.values.setflags(write=False)
        self.L = max((l for l, _ in keys), default=0) if L is None else int(L)
        self._degrees = np.array([l for l, _ in keys], dtype=int)
        self._pos = None

    # construction -------------------------------------------------------

    @classmethod
    def from_entries(cls, dim, entries: dict, L: int | None = None):
        keys = list(entries)
        return cls(dim, keys, [entries[k] for k in keys], L)

    @classmethod
    def dense(cls, dim, L: int, values=None):
        dim = as_dim(dim)
        keys, _ = _full_index(dim.n, L)
        vals = np.zeros(len(keys), dtype=complex) if values is None else values
        return cls(dim, keys, vals, L, validate=False)

    @classmethod
    def random(cls, dim, L: int, rng=None, min_degree: int = 0):
        """Band-limited signal with a_l^k uniform on the unit disc, l <= L.

        Degrees below ``min_degree`` are set to zero.
        """
        rng = np.random.default_rng(rng)
        dim = as_dim(dim)
        keys, _ = _full_index(dim.n, L)
        m = len(keys)
        radius = np.sqrt(rng.uniform(0.0, 1.0, m))
        phase = rng.uniform(0.0, 2.0 * np.pi, m)
        vals = radius * np.exp(1j * phase)
        vals[np.array([l for l, _ in keys]) < min_degree] = 0.0
        return cls(dim, keys, vals, L, validate=False)

    # access --------------------------------------------------------------

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    @property
    def entries(self) -> dict:
        return dict(zip(self.keys, self.values))

    def _index(self):
        if self._pos is None:
            self._pos = {key: i for i, key in enumerate(self.keys)}
        return self._pos

    def __getitem__(self, key):
        l, k = key
        i = self._index().get((int(l), tuple(k)))
        return 0j if i is None else complex(self.values[i])

    def __len__(self):
        return len(self.keys)

    def __repr__(self):
        return f"HarmonicSpectrum(n={self.dim.n}, L={self.L}, nnz={len(self.keys)})"

    def with_values(self, values):
        return HarmonicSpectrum(self.dim, self.keys, values, self.L, validate=False)

    def truncate(self, L: int):
        mask = self._degrees <= L
        return HarmonicSpectrum(self.dim, [k for k, m in zip(self.keys, mask) if m], self.values[mask], L)

    def aligned(self, other: "HarmonicSpectrum"):
        """Values of self and other on the union of their keys."""
        _same_dim(self.dim, other.dim)
        if self.keys == other.keys:
            return self.keys, self.values, other.values
        keys = list(self.keys) + [k for k in other.keys if k not in self._index()]
        a = np.array([self[k] for k in keys])
        b = np.array([other[k] for k in keys])
        return keys, a, b

    def __add__(self, other):
        keys, a, b = self.aligned(other)
        return HarmonicSpectrum(self.dim, keys, a + b, max(self.L, other.L))

    def __sub__(self, other):
        keys, a, b = self.aligned(other)
        return HarmonicSpectrum(self.dim, keys, a - b, max(self.L, other.L))

    def __mul__(self, s):
        return self.with_values(self.values * s)

    __rmul__ = __mul__

    def inner(self, other) -> complex:
        """<self, other> = sum conj(a) b (harmonics orthonormal)."""
        _, a, b = self.aligned(other)
        return complex(np.sum(np.conj(a) * b))

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))

    def is_zonal(self, tol=0.0) -> bool:
        return all(abs(v) <= tol for (l, k), v in zip(self.keys, self.values) if any(k))

    def to_json(self):
        return {"n": self.dim.n, "L": self.L,
                "entries": [{"l": l, "k": list(k), "re": float(v.real), "im": float(v.imag)}
                            for (l, k), v in zip(self.keys, self.values)]}

    @classmethod
    def from_json(cls, obj):
        ents = obj["entries"]
        keys = [(e["l"], tuple(e["k"])) for e in ents]
        vals = [complex(e["re"], e["im"]) for e in ents]
        return cls(SphereDim(obj["n"]), keys, vals, obj.get("L"))


def _zonal_factor(dim: SphereDim, l):
    return dim.lam / (dim.lam + np.asarray(l, dtype=float))


def _coeff_at(spec: ZonalSpectrum, degrees):
    out = np.zeros(len(degrees), dtype=complex)
    ok = degrees <= spec.L
    out[ok] = spec.coeffs[degrees[ok]]
    return out


def convolve(f, h: ZonalSpectrum):
    """f * h for zonal h (Funk-Hecke): a_l^k -> lam/(lam+l) a_l^k h(l).

    ``f`` may be a HarmonicSpectrum or a ZonalSpectrum; the result has the
    same type, truncated at the smaller of the two degrees.
    """
    _same_dim(f.dim, h.dim)
    L = min(f.L, h.L)
    if isinstance(f, ZonalSpectrum):
        l = np.arange(L + 1)
        return ZonalSpectrum(f.dim, _zonal_factor(f.dim, l) * f.coeffs[: L + 1] * h.coeffs[: L + 1])
    g = f.truncate(L)
    return g.with_values(_zonal_factor(f.dim, g.degrees) * g.values * _coeff_at(h, g.degrees))


def zonal_product(f: HarmonicSpectrum, h: HarmonicSpectrum) -> ZonalSpectrum:
    """Spectrum of the rotation-averaged product f (*^) h.

    g(l) = (lam+l)/lam * sum_k a_l^k(f) a_l^k(h) / N(n, l).
    """
    _same_dim(f.dim, h.dim)
    keys, a, b = f.aligned(h)
    L = max(f.L, h.L)
    deg = np.array([l for l, _ in keys], dtype=int)
    sums = np.zeros(L + 1, dtype=complex)
    np.add.at(sums, deg, a * b)
    l = np.arange(L + 1)
    N = np.array([harmonic_dimension(f.dim.n, int(j)) for j in l], dtype=float)
    return ZonalSpectrum(f.dim, f.dim.reproducing_factor(l) * sums / N)


def fourier_gegenbauer_bridge(spec: ZonalSpectrum) -> HarmonicSpectrum:
    """Zonal spectrum -> Fourier coefficients, a_l^0 = g(l) / A_l^0."""
    n = spec.dim.n
    l = np.arange(spec.L + 1)
    zero = (0,) * (n - 1)
    return HarmonicSpectrum(spec.dim, [(int(j), zero) for j in l], spec.coeffs / zonal_norm_constant(n, l), spec.L)


def zonal_part(f: HarmonicSpectrum) -> ZonalSpectrum:
    """Inverse bridge: g(l) = A_l^0 a_l^0, ignoring nonzonal entries."""
    n = f.dim.n
    zero = (0,) * (n - 1)
    l = np.arange(f.L + 1)
    a0 = np.array([f[(int(j), zero)] for j in l])
    return ZonalSpectrum(f.dim, zonal_norm_constant(n, l) * a0)


def degree_energy(f: HarmonicSpectrum) -> np.ndarray:
    """sum_k |a_l^k|^2 for l = 0..L."""
    out = np.zeros(f.L + 1)
    np.add.at(out, f.degrees, np.abs(f.values) ** 2)
    return out


# --------------------------------------------------------------------------
# norms


def _graded_edges(width, stop):
    edges = []
    e = width / 8.0
    while e < stop:
        edges.append(e)
        e *= 1.5
    return edges


def theta_rule(lam: float, width: float = math.pi, width_south: float | None = None,
               nodes_per_panel: int = 16, uniform_panels: int = 48):
    """Composite Gauss-Legendre rule in theta for int_0^pi g(theta) sin^(2 lam) theta d theta.

    Panels are geometrically graded towards theta = 0 down to ``width`` (and
    towards theta = pi down to ``width_south`` if given), so functions
    concentrated near a pole are resolved. Returned weights include the
    sin^(2 lam) factor.
    """
    x, w = np.polynomial.legendre.leggauss(nodes_per_panel)
    width = min(max(width, 1e-12), math.pi)
    north = _graded_edges(width, math.pi / 4)
    south = []
    if width_south is not None:
        south = [math.pi - e for e in _graded_edges(min(max(width_south, 1e-12), math.pi), math.pi / 4)]
    lo = north[-1] if north else 0.0
    hi = min(south) if south else math.pi
    edges = np.unique(np.concatenate([[0.0], north, np.linspace(lo, hi, uniform_panels + 1), south, [math.pi]]))
    a, b = edges[:-1, None], edges[1:, None]
    th = (0.5 * (b - a) * x + 0.5 * (b + a)).ravel()
    wt = (0.5 * (b - a) * w).ravel() * np.sin(th) ** (2.0 * lam)
    return th, wt


def lp_norm(func: Callable, dim, p: float = 1.0, width: float = math.pi) -> float:
    """L^p norm of a zonal callable for the normalised measure (graded quadrature)."""
    dim = as_dim(dim)
    th, wt = theta_rule(dim.lam, width)
    vals = np.abs(func(np.cos(th)))
    c0 = gegenbauer_norm_constant(0, dim.lam)
    return float((c0 * np.sum(wt * vals ** p)) ** (1.0 / p))


def norm(f, which: str = "L2", width: float | None = None) -> float:
    """L1, L2 or sup norm (normalised measure).

    L2 of a spectrum is spectral (Parseval); L1 and sup are quadrature based.
    """
    which = which.upper()
    if isinstance(f, HarmonicSpectrum):
        if which != "L2":
            raise NotImplementedError("only the L2 norm of a general spectrum is available")
        return f.norm()
    if isinstance(f, ZonalSamples):
        lam = f.dim.lam
        vals = np.abs(f.values)
        c0 = gegenbauer_norm_constant(0, lam)
        if which == "L1":
            return float(c0 * np.sum(f.rule.weights * vals))
        if which == "L2":
            return float(np.sqrt(c0 * np.sum(f.rule.weights * vals ** 2)))
        if which == "SUP":
            return float(vals.max())
        raise ValueError(f"unknown norm {which!r}")
    lam = f.lam
    if which == "L2":
        l = np.arange(f.L + 1)
        ratio = gegenbauer_norm_constant(0, lam) / gegenbauer_norm_constant(l, lam)
        return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2 * ratio)))
    w = width if width is not None else math.pi / max(f.L, 1)
    if which == "L1":
        return lp_norm(f, f.dim, 1.0, w)
    if which == "SUP":
        th, _ = theta_rule(lam, w)
        grid = np.concatenate([[0.0], th, [math.pi]])
        return float(np.abs(evaluate(f, np.cos(grid))).max())
    raise ValueError(f"unknown norm {which!r}")
