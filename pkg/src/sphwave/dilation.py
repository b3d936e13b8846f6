"""Dilation of zonal functions through stereographic projection.

A point at polar angle theta is sent to |xi| = 2 tan(theta/2) on the
tangent plane at the north pole, scaled by ``a`` and projected back, so
tan(theta_a / 2) = a tan(theta / 2). The dilated function carries the
Radon-Nikodym factor mu(a, theta) that keeps the L1 mass:

    f^a(theta_a) = mu(a, theta) f(theta),
    mu(a, t) = (((1 + t) + a^2 (1 - t)) / (2a))^n,   t = cos(theta).
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .kernels import KernelFamily
from .specfun import as_dim, gegenbauer_norm_constant, gegenbauer_table
from .zonal import ZonalSamples, ZonalSpectrum, coefficients_from_samples, evaluate, theta_rule


def _check_a(a):
    if not a > 0:
        raise ValueError(f"dilation parameter must be positive, got {a!r}")


def dilation_map(t, a: float):
    """t -> t^a, the cosine of the dilated polar angle. Poles are fixed."""
    _check_a(a)
    t = np.asarray(t, dtype=float)
    a2 = a * a
    return ((1.0 + t) - a2 * (1.0 - t)) / ((1.0 + t) + a2 * (1.0 - t))


def dilate_angle(theta, a: float):
    _check_a(a)
    return 2.0 * np.arctan(a * np.tan(0.5 * np.asarray(theta, dtype=float)))


def mu_factor(a: float, t, n: int):
    """mu(a, theta) at t = cos(theta) (the undilated point); always positive."""
    _check_a(a)
    t = np.asarray(t, dtype=float)
    return (((1.0 + t) + a * a * (1.0 - t)) / (2.0 * a)) ** n


def dilate(func: Callable, a: float, n: int) -> Callable:
    """The L1-preserving dilation f^a of a zonal callable on S^n."""
    _check_a(a)

    def f_a(s):
        t = dilation_map(s, 1.0 / a)
        return mu_factor(a, t, n) * func(t)

    return f_a


def _interpolant(f: ZonalSamples) -> ZonalSpectrum:
    return coefficients_from_samples(f, f.rule.order - 1)


def stereographic_dilate(f, a: float, n: int | None = None):
    """Dilate ``f`` by ``a``.

    ``f`` is a callable (then ``n`` is required and a callable is returned)
    or ZonalSamples; in the latter case the samples are interpolated by their
    Gegenbauer expansion and the dilated function is sampled back at the
    same nodes.
    """
    if isinstance(f, ZonalSamples):
        spec = _interpolant(f)
        g = dilate(lambda t: evaluate(spec, t), a, f.dim.n)
        return ZonalSamples(f.dim, f.rule, g(f.rule.nodes))
    if n is None:
        raise ValueError("sphere dimension needed to dilate a callable")
    return dilate(f, a, n)


def dilated_coefficients(func: Callable, a: float, dim, L: int, width: float = math.pi):
    """Gegenbauer coefficients of f^a up to degree L.

    Uses the substitution t -> t^a, so only ``func`` itself is sampled:
    c(l) int f(t) C_l(t^a) (1-t^2)^(lam-1/2) dt. The theta rule is graded at
    the pole where t -> t^a varies fastest (the south pole for a < 1).
    """
    dim = as_dim(dim)
    lam = dim.lam
    if a < 1:
        th, wt = theta_rule(lam, width, width_south=2.0 * a)
    else:
        th, wt = theta_rule(lam, min(width, 2.0 / a))
    t = np.cos(th)
    ta = np.cos(dilate_angle(th, a))
    C = gegenbauer_table(L, lam, ta)
    return gegenbauer_norm_constant(np.arange(L + 1), lam) * (C @ (wt * func(t)))


def dilation_family(f, dim=None, width: float = math.pi) -> KernelFamily:
    """Family a -> f^a, normalised so that its degree-0 coefficient is 1.

    ``f`` is a callable zonal function (``dim`` required) or ZonalSamples.
    ``width`` is the angular scale of ``f`` itself, used to grade quadrature.
    """
    if isinstance(f, ZonalSamples):
        dim = f.dim
        spec = _interpolant(f)
        func = lambda t: evaluate(spec, t)  # noqa: E731
    else:
        if dim is None:
            raise ValueError("sphere dimension needed for a callable profile")
        func = f
    dim = as_dim(dim)
    f0 = dilated_coefficients(func, 1.0, dim, 0, width)[0]
    if abs(f0) < 1e-12:
        raise ValueError("profile has vanishing mean; it cannot be normalised to an approximate identity")
    n = dim.n

    def normalized(t):
        return func(t) / f0

    def coeffs(a, l):
        l = np.asarray(l)
        L = int(l.max()) if l.size else 0
        return dilated_coefficients(normalized, a, dim, L, width)[l]

    def spatial(a, s):
        return dilate(normalized, a, n)(s)

    return KernelFamily(dim, coeffs, "dilated", spatial=spatial,
                        width_fn=lambda a: min(math.pi, a * width),
                        meta={"mean": complex(f0)})
