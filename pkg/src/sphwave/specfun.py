"""Special functions and quadrature for spectral work on the n-sphere.

Gegenbauer polynomials are evaluated with the three-term recurrence

    (l+1) C_{l+1}(t) = 2 (l+lam) t C_l(t) - (l+2 lam-1) C_{l-1}(t),

which is stable on [-1, 1]. All factorial and Gamma ratios go through
``gammaln`` so degrees in the thousands do not overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special


@dataclass(frozen=True)
class SphereDim:
    """Dimension ``n`` of the sphere S^n embedded in R^(n+1)."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"sphere dimension must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def lam(self) -> float:
        return (self.n - 1) / 2.0

    @property
    def sigma(self) -> float:
        """Total surface measure 2 pi^((n+1)/2) / Gamma((n+1)/2)."""
        return 2.0 * math.pi ** ((self.n + 1) / 2.0) / math.gamma((self.n + 1) / 2.0)

    def reproducing_factor(self, l):
        """(lam + l) / lam, the Gegenbauer coefficient of the degree-l reproducing kernel."""
        return (self.lam + np.asarray(l, dtype=float)) / self.lam


def as_dim(dim) -> SphereDim:
    return dim if isinstance(dim, SphereDim) else SphereDim(int(dim))


def _check_lambda(lam):
    if not lam > 0:
        raise ValueError(f"Gegenbauer index must be positive, got {lam!r}")


def _check_interval(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0 + 1e-14):
        raise ValueError("Gegenbauer argument outside [-1, 1]")
    return np.clip(t, -1.0, 1.0)


def gegenbauer(l: int, lam: float, t):
    """C_l^lam(t) by forward recurrence; ``t`` may be a scalar or an array."""
    if l < 0:
        raise ValueError("degree must be nonnegative")
    _check_lambda(lam)
    t = _check_interval(t)
    c_prev = np.ones_like(t)
    if l == 0:
        return c_prev if c_prev.ndim else float(c_prev)
    c = 2.0 * lam * t
    for k in range(1, l):
        c_prev, c = c, (2.0 * (k + lam) * t * c - (k + 2.0 * lam - 1.0) * c_prev) / (k + 1)
    return c if c.ndim else float(c)


def gegenbauer_table(L: int, lam: float, t) -> np.ndarray:
    """Array of shape (L+1, *t.shape) holding C_0^lam(t) .. C_L^lam(t)."""
    _check_lambda(lam)
    t = _check_interval(t)
    out = np.empty((L + 1,) + t.shape)
    out[0] = 1.0
    if L >= 1:
        out[1] = 2.0 * lam * t
    for k in range(1, L):
        out[k + 1] = (2.0 * (k + lam) * t * out[k] - (k + 2.0 * lam - 1.0) * out[k - 1]) / (k + 1)
    return out


def gegenbauer_sum(coeffs, lam: float, t):
    """Clenshaw summation of sum_l coeffs[l] C_l^lam(t).

    ``coeffs`` may be complex. Work is O(L) vector operations over ``t``.
    """
    _check_lambda(lam)
    t = _check_interval(t)
    a = np.asarray(coeffs)
    dtype = np.result_type(a.dtype, float)
    b1 = np.zeros(t.shape, dtype=dtype)
    b2 = np.zeros(t.shape, dtype=dtype)
    for k in range(a.size - 1, -1, -1):
        alpha = 2.0 * t * (k + lam) / (k + 1)
        beta = -(k + 2.0 * lam) / (k + 2)
        b1, b2 = a[k] + alpha * b1 + beta * b2, b1
    return b1 if b1.ndim else b1[()]


def gegenbauer_at_one(l, lam):
    """C_l^lam(1) = binom(2 lam + l - 1, l), in log-space."""
    l = np.asarray(l, dtype=float)
    return np.exp(special.gammaln(2.0 * lam + l) - special.gammaln(l + 1.0) - special.gammaln(2.0 * lam))


def harmonic_dimension(n: int, l: int) -> int:
    """N(n, l): number of linearly independent degree-l harmonics on S^n."""
    if n < 2 or l < 0:
        raise ValueError("need n >= 2 and l >= 0")
    num = (n + 2 * l - 1) * math.comb(n + l - 2, l)
    return num // (n - 1)


def gegenbauer_norm_constant(l, lam: float):
    """c(l, lam), the constant making the Gegenbauer system self-dual.

    With it, g(l) = c(l, lam) * int g(t) C_l^lam(t) (1-t^2)^(lam-1/2) dt
    recovers the coefficients of sum_l g(l) C_l^lam.
    """
    _check_lambda(lam)
    l = np.asarray(l, dtype=float)
    logc = (special.gammaln(lam) + special.gammaln(2.0 * lam) + np.log(lam + l)
            + special.gammaln(l + 1.0) - 0.5 * math.log(math.pi)
            - special.gammaln(lam + 0.5) - special.gammaln(2.0 * lam + l))
    out = np.exp(logc)
    return out if out.ndim else float(out)


def weight_integral(lam: float) -> float:
    """int_{-1}^{1} (1-t^2)^(lam-1/2) dt."""
    return math.sqrt(math.pi) * math.gamma(lam + 0.5) / math.gamma(lam + 1.0)


def zonal_norm_constant(n: int, l):
    """A_l^0, normalisation of the zonal harmonic of degree l on S^n."""
    if n < 2:
        raise ValueError("need n >= 2")
    l = np.asarray(l, dtype=float)
    # (n-2)! l! (n+2l-1) / ((n+l-2)! (n-1))
    log_sq = (special.gammaln(n - 1.0) + special.gammaln(l + 1.0) + np.log(n + 2.0 * l - 1.0)
              - special.gammaln(n + l - 1.0) - math.log(n - 1.0))
    out = np.exp(0.5 * log_sq)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the weight (1-t^2)^(lam-1/2) on (-1, 1)."""

    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    lam: float = 0.5

    @property
    def order(self) -> int:
        return len(self.nodes)

    @property
    def exactness(self) -> int:
        return 2 * self.order - 1

    def integrate(self, values):
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))


def gauss_gegenbauer(lam: float, m: int) -> QuadratureRule:
    """m-point Gauss-Gegenbauer rule, exact for polynomials of degree <= 2m-1."""
    if m < 1:
        raise ValueError("need at least one node")
    _check_lambda(lam)
    x, w = special.roots_gegenbauer(m, lam)
    bad = np.flatnonzero(~np.isfinite(x) | ~np.isfinite(w) | (w <= 0) | (np.abs(x) >= 1))
    if bad.size:
        raise ArithmeticError(f"node solver failed at index {int(bad[0])} (lam={lam}, m={m})")
    return QuadratureRule(np.asarray(x, dtype=float), np.asarray(w, dtype=float), float(lam))


def bessel_j(nu, x):
    """Bessel function of the first kind J_nu(x) for nu >= 0, x >= 0."""
    return special.jv(nu, x)
