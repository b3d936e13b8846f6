"""Euclidean limit of zonal wavelets.

For small rho the wavelet, pulled back to the tangent plane by inverse
stereographic projection and scaled by rho^n, approaches a function F on
R^n. For a generating function psi the limit is proportional to the
radial transform

    H(r) = r^(1/2 - lam) int_0^inf t^(lam+1/2) psi(t) J_(lam-1/2)(t r) dt,

which is what the probe is compared with. Families whose coefficients
behave like psi(l sqrt(rho)) (Gauss-Weierstrass type) are probed at
scale s with rho = s^2.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .bilinear import WaveletFamily
from .kernels import MAX_SPATIAL_DEGREE, effective_degree
from .specfun import as_dim, bessel_j, gegenbauer_sum

SCALE_CONVENTIONS = {"rho": "probe scale s = rho", "sqrt": "probe scale s = sqrt(rho), i.e. rho = s^2"}


def inverse_stereographic(r, angles=None):
    """Polar angle theta = 2 arctan(r/2) of S^-1(xi), |xi| = r; other angles pass through."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    theta = 2.0 * np.arctan(0.5 * r)
    return theta if angles is None else (theta, angles)


def theta_asymptotic_constant(r, rhos) -> float:
    """max |cos(2 arctan(rho r/2)) - cos(rho r)| / rho^4 over the grids (tends to r^4/12)."""
    r = np.asarray(r, dtype=float)
    best = 0.0
    for rho in rhos:
        x = rho * r
        d = np.abs(np.cos(2.0 * np.arctan(0.5 * x)) - np.cos(x)) / rho ** 4
        best = max(best, float(d.max()))
    return best


# --------------------------------------------------------------------------
# preconditions on psi


def square_integrability(psi: Callable, n: int, decades: int = 6) -> dict:
    """int_0^inf |psi(t)|^2 t^(n-1) dt, judged finite when the last decade is negligible."""
    def g(t):
        return abs(psi(t)) ** 2 * t ** (n - 1)

    # a divergent integrand makes quad complain; the decade test below is the verdict
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        head, _ = integrate.quad(g, 0.0, 1.0, limit=200)
        parts = [integrate.quad(g, 10.0 ** k, 10.0 ** (k + 1), limit=200)[0] for k in range(decades)]
    total = head + sum(parts)
    finite = bool(math.isfinite(total) and parts[-1] <= 1e-6 * max(total, 1e-300) and parts[-1] <= parts[-2] + 1e-300)
    return {"value": total if finite else math.inf, "finite": finite, "last_decade": parts[-1]}


def small_scale_sum(psi: Callable, n: int, rho: float, c: float = 1.0) -> float:
    """rho^n sum_{l <= c/rho} l^(n-1) |psi(l rho)|; the theorem wants it below a small epsilon."""
    l = np.arange(int(c / rho) + 1, dtype=float)
    return float(rho ** n * np.sum(l ** (n - 1) * np.abs(psi(l * rho))))


def tabulated_psi(t, values) -> Callable:
    """psi from samples: linear inside the table, power law (log-log) beyond the last two points.

    psi is 0 at t = 0 only if the first sample says so; below the first
    node it is held linear towards (0, values[0]).
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) <= 0) or t[0] < 0 or v.shape != t.shape:
        raise ValueError("psi table needs increasing nonnegative nodes and matching values")
    if v[-1] != 0 and v[-2] != 0 and np.sign(v[-1]) == np.sign(v[-2]):
        slope = math.log(abs(v[-1] / v[-2])) / math.log(t[-1] / t[-2])
    else:
        slope = None

    def psi(x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, t, v)
        far = x > t[-1]
        if np.any(far):
            out = np.where(far, v[-1] * (np.maximum(x, t[-1]) / t[-1]) ** slope if slope is not None else 0.0, out)
        return out if out.ndim else float(out)

    return psi


def generating_family(dim, psi: Callable, label: str = "psi-wavelet") -> WaveletFamily:
    """Zonal family with coefficients (lam+l)/lam psi(l rho)."""
    dim = as_dim(dim)
    lam = dim.lam
    return WaveletFamily(dim, coeff_fn=lambda rho, l: (lam + l) / lam * psi(l * rho), label=label, psi=psi,
                         euclid={"psi": psi, "scale": "rho"})


# --------------------------------------------------------------------------
# probe and oracle


@dataclass
class EuclideanProbe:
    r: np.ndarray
    scales: np.ndarray
    values: np.ndarray  # (len(scales), len(r))
    degrees: list
    convention: str
    n: int


def _profile(fam: WaveletFamily):
    e = fam.euclid or {}
    psi = e.get("psi", fam.psi)
    scale = e.get("scale", "rho")
    if scale not in SCALE_CONVENTIONS:
        raise ValueError(f"unknown scale convention {scale!r}")
    return psi, scale


def euclidean_probe(fam: WaveletFamily, r, scales, tail_tol: float = 1e-10) -> EuclideanProbe:
    """s^n Psi_rho(S^-1(s xi)) for |xi| in r and the probe scales s (rho = s or s^2)."""
    if not fam.is_zonal:
        raise TypeError("the Euclidean probe is implemented for zonal families only")
    _, scale = _profile(fam)
    r = np.asarray(r, dtype=float)
    s = np.asarray(scales, dtype=float)
    if np.any(np.diff(s) >= 0):
        raise ValueError("probe scales must be strictly decreasing")
    n = fam.dim.n
    lam = fam.lam
    values, degrees = [], []
    for sj in s:
        rho = sj * sj if scale == "sqrt" else sj
        L = effective_degree(lambda l: fam.coefficients(rho, l), lam, tail_tol)
        if L > MAX_SPATIAL_DEGREE:
            raise ValueError(f"truncation failure at scale {sj:.3g}: needs degree {L} > {MAX_SPATIAL_DEGREE}")
        t = np.cos(inverse_stereographic(sj * r))
        coeffs = fam.coefficients(rho, np.arange(L + 1))
        col = sj ** n * gegenbauer_sum(coeffs, lam, t)
        values.append(col.real if np.all(np.abs(col.imag) <= 1e-13 * (np.abs(col).max() + 1e-300)) else col)
        degrees.append(int(L))
    return EuclideanProbe(r, s, np.array(values), degrees, SCALE_CONVENTIONS[scale], n)


@dataclass
class HankelOracle:
    r: np.ndarray
    values: np.ndarray
    lam: float
    upper: float
    tail_bound: float


def _support_end(psi, lam, start=1.0, tol=1e-17):
    """Smallest T (doubling) with |t^(lam+1/2) psi(t)| < tol * peak on [T, 4T]."""
    grid = np.linspace(0.0, start, 200)[1:]
    peak = float(np.max(np.abs(grid ** (lam + 0.5) * psi(grid))))
    T = start
    while T < 1e6:
        probe = np.linspace(T, 4 * T, 50)
        mag = np.abs(probe ** (lam + 0.5) * psi(probe))
        peak = max(peak, float(mag.max()))
        if mag.max() < tol * max(peak, 1e-300):
            return T
        T *= 2.0
    raise ArithmeticError("profile does not decay; the radial transform does not converge")


def hankel_oracle(psi: Callable, lam: float, r, upper: float | None = None) -> HankelOracle:
    """r^(1/2-lam) int_0^T t^(lam+1/2) psi(t) J_(lam-1/2)(t r) dt by adaptive quadrature.

    ``upper`` (T) defaults to where the profile falls below 1e-17 of its
    peak; the neglected tail is bounded by int_T^inf |t^(lam+1/2) psi| (J is
    bounded by one), and reported.
    """
    nu = lam - 0.5
    r = np.asarray(r, dtype=float)
    T = _support_end(psi, lam) if upper is None else float(upper)
    tail, _ = integrate.quad(lambda t: abs(t ** (lam + 0.5) * psi(t)), T, math.inf, limit=200)
    if not math.isfinite(tail):
        raise ArithmeticError("radial transform tail does not converge")
    out = []
    for ri in r:
        if ri == 0.0:
            # r^(-nu) J_nu(t r) -> (t/2)^nu / Gamma(nu + 1)
            f = lambda t: t ** (lam + 0.5) * psi(t) * (0.5 * t) ** nu / math.gamma(nu + 1.0)  # noqa: E731
            v, _ = integrate.quad(f, 0.0, T, limit=400)
            out.append(v)
            continue
        f = lambda t, ri=ri: t ** (lam + 0.5) * psi(t) * bessel_j(nu, t * ri)  # noqa: E731
        pts = np.arange(1, int(T * ri / math.pi)) * math.pi / ri
        pts = pts[:: max(1, len(pts) // 40)] if len(pts) else None
        v, _ = integrate.quad(f, 0.0, T, limit=1000, points=pts, epsabs=1e-13, epsrel=1e-11)
        out.append(v / ri ** nu)
    return HankelOracle(r, np.array(out), lam, T, tail)


def predicted_ratio(lam: float) -> float:
    """Limit of probe / oracle for coefficients exactly (lam+l)/lam psi(l rho).

    Follows from C_l^lam(cos(x/l)) ~ l^(2 lam-1) Gamma(lam+1/2) (2/x)^(lam-1/2) J_(lam-1/2)(x) / Gamma(2 lam).
    """
    return 2.0 ** (lam - 0.5) * math.gamma(lam + 0.5) / (lam * math.gamma(2.0 * lam))


# --------------------------------------------------------------------------
# report


@dataclass
class EuclidReport:
    family: str
    n: int
    convention: str
    r: list
    scales: list
    degrees: list
    cauchy_diffs: list
    cauchy_rates: list
    ratio: list
    ratio_median: float
    ratio_spread: float
    excluded: list
    predicted_ratio: float | None
    precondition: dict
    l2_check: dict | None
    min_rate: float = 1.5
    max_spread: float = 0.02
    notes: list = field(default_factory=list)
    probe_values: np.ndarray | None = field(default=None, repr=False)
    oracle_values: np.ndarray | None = field(default=None, repr=False)

    @property
    def cauchy_ok(self) -> bool:
        return bool(self.cauchy_rates) and min(self.cauchy_rates) >= self.min_rate

    @property
    def ratio_ok(self) -> bool:
        return math.isfinite(self.ratio_spread) and self.ratio_spread < self.max_spread

    @property
    def passed(self) -> bool:
        return self.precondition.get("ok", False) and self.cauchy_ok and self.ratio_ok

    def to_json(self) -> dict:
        return {
            "kind": "euclidean-limit", "family": self.family, "n": self.n, "convention": self.convention,
            "verdict": "pass" if self.passed else "fail",
            "precondition": self.precondition,
            "scales": self.scales, "degrees": self.degrees,
            "cauchy_diffs": self.cauchy_diffs, "cauchy_rates": self.cauchy_rates,
            "min_rate": self.min_rate, "ratio_median": self.ratio_median, "ratio_spread": self.ratio_spread,
            "max_spread": self.max_spread, "predicted_ratio": self.predicted_ratio,
            "excluded_r": self.excluded, "l2_check": self.l2_check, "notes": self.notes,
        }

    def to_csv(self, fh=None):
        """Rows (r, rho, probe, oracle, ratio); the ratio column is filled at the smallest scale."""
        out = fh if fh is not None else io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["r", "rho", "probe", "oracle", "ratio"])
        last = len(self.scales) - 1
        for j, s in enumerate(self.scales):
            for i, ri in enumerate(self.r):
                ratio = self.ratio[i] if j == last and self.ratio else None
                w.writerow([repr(float(ri)), repr(float(s)), repr(float(self.probe_values[j, i])),
                            repr(float(self.oracle_values[i])), "" if ratio is None else repr(ratio)])
        return None if fh is not None else out.getvalue()


def euclidean_limit_report(probe: EuclideanProbe, oracle: HankelOracle, exclude: float = 0.05,
                           min_rate: float = 1.5, max_spread: float = 0.02, family: str = "",
                           precondition: dict | None = None, l2_check: dict | None = None,
                           predicted: float | None = None) -> EuclidReport:
    """Cauchy rates of the probe columns and constancy of probe / oracle at the smallest scale.

    Radii where |oracle| < ``exclude`` * max |oracle| (near its zeros) are
    left out of the ratio and listed.
    """
    if not np.array_equal(probe.r, oracle.r):
        raise ValueError("probe and oracle use different radial grids")
    v = probe.values
    diffs = [float(np.max(np.abs(v[j + 1] - v[j]))) for j in range(len(v) - 1)]
    rates = [diffs[j] / diffs[j + 1] if diffs[j + 1] > 0 else math.inf for j in range(len(diffs) - 1)]
    o = oracle.values
    cut = exclude * float(np.max(np.abs(o))) if o.size else 0.0
    keep = np.abs(o) > cut
    if np.iscomplexobj(v):
        raise ValueError("probe values are complex; the ratio test needs a real profile")
    ratio = np.where(keep, v[-1] / np.where(keep, o, 1.0), np.nan)
    notes = []
    if keep.any():
        med = float(np.median(ratio[keep]))
        spread = float(np.max(np.abs(ratio[keep] / med - 1.0))) if med != 0 else math.inf
    else:
        med, spread = math.nan, math.inf
        notes.append("oracle vanishes on the whole grid")
    excluded = [float(x) for x in probe.r[~keep]]
    if excluded:
        notes.append(f"{len(excluded)} radii excluded where |oracle| < {exclude:g} max|oracle|")
    return EuclidReport(family, probe.n, probe.convention, [float(x) for x in probe.r],
                        [float(x) for x in probe.scales], probe.degrees, diffs, rates,
                        [None if not k else float(x) for x, k in zip(ratio, keep)], med, spread, excluded,
                        predicted, precondition or {"ok": True}, l2_check, min_rate, max_spread, notes, v, o)


def l2_crosscheck(psi: Callable, lam: float, r_max: float = 60.0, count: int = 240) -> dict:
    """int_0^inf |H(r)|^2 r^(n-1) dr against int_0^inf |psi(t)|^2 t^(n-1) dt (equal by Plancherel)."""
    n = int(round(2 * lam + 1))
    x, w = np.polynomial.legendre.leggauss(count)
    # graded map r = r_max ((1 + x)/2)^2 to resolve the peak near r = 0
    u = 0.5 * (x + 1.0)
    r = r_max * u * u
    jac = r_max * 2.0 * u * 0.5
    H = hankel_oracle(psi, lam, r).values
    lhs = float(np.sum(w * jac * np.abs(H) ** 2 * r ** (n - 1)))
    rhs = square_integrability(psi, n)["value"]
    rel = abs(lhs / rhs - 1.0) if rhs and math.isfinite(rhs) else math.inf
    return {"transform_l2": lhs, "profile_l2": rhs, "relative_difference": rel, "ok": bool(rel < 0.05)}


def euclid_scales(smallest: float = 1e-3, levels: int = 5) -> np.ndarray:
    """Halving sequence smallest * 2^(levels-1), ..., smallest."""
    return smallest * 2.0 ** np.arange(levels - 1, -1, -1)


def euclid_study(fam: WaveletFamily, r=None, scales=None, exclude: float = 0.05, min_rate: float = 1.5,
                 max_spread: float = 0.02, l2: bool = False, small_scale_c: float = 1.0) -> EuclidReport:
    """Precondition gate, probe, oracle and report in one call."""
    psi, scale = _profile(fam)
    n = fam.dim.n
    lam = fam.lam
    r = np.linspace(0.1, 5.0, 50) if r is None else np.asarray(r, dtype=float)
    scales = euclid_scales() if scales is None else np.asarray(scales, dtype=float)
    if psi is None:
        pre = {"ok": False, "reason": "family has no generating profile psi"}
        return _failed(fam, n, scale, r, scales, pre)
    sq = square_integrability(psi, n)
    pre = {"ok": sq["finite"], "square_integral": sq["value"],
           "small_scale_sum": small_scale_sum(psi, n, float(scales[-1]), small_scale_c), "small_scale_c": small_scale_c}
    if not sq["finite"]:
        pre["reason"] = "psi is not square integrable against t^(n-1) dt"
        return _failed(fam, n, scale, r, scales, pre)
    try:
        probe = euclidean_probe(fam, r, scales)
        oracle = hankel_oracle(psi, lam, r)
    except (ValueError, ArithmeticError) as exc:
        pre = dict(pre, ok=False, reason=str(exc))
        return _failed(fam, n, scale, r, scales, pre)
    # every profile here satisfies Psi^(l) ~ (lam+l)/lam psi(l s), so the constant is known
    pred = predicted_ratio(lam)
    check = l2_crosscheck(psi, lam) if l2 else None
    rep = euclidean_limit_report(probe, oracle, exclude, min_rate, max_spread, fam.label, pre, check, pred)
    rep.notes.append(f"small-scale sum at c={small_scale_c:g}: {pre['small_scale_sum']:.3g} (informational)")
    return rep


def _failed(fam, n, scale, r, scales, pre) -> EuclidReport:
    return EuclidReport(fam.label, n, SCALE_CONVENTIONS[scale], [float(x) for x in r], [float(x) for x in scales],
                        [], [], [], [], math.nan, math.inf, [], None, pre, None,
                        notes=[pre.get("reason", "precondition failed")],
                        probe_values=np.zeros((len(scales), len(r))), oracle_values=np.zeros(len(r)))
