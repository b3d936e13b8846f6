"""Command-line front end.

    sphwave catalog
    sphwave check --family abel-poisson-wavelet --n 3
    sphwave roundtrip --family poisson-multipole:1 --n 2 --L 32 --seed 7
    sphwave euclid --family abel-poisson-wavelet --n 2 --format csv --out limit.csv

Exit codes: 0 pass, 1 failed check, 2 usage or configuration error.
Options may also come from a JSON file (--config); flags override it. The
report goes to --out or stdout; --quiet silences the status line on stderr.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import catalog
from .bilinear import (
    ScalingFunction,
    WaveletFamily,
    bilinear_synthesize,
    bilinear_transform,
    check_bilinear_admissibility,
    isometry_check,
    relative_error,
    wavelet_from_kernel,
)
from .euclid import euclid_scales, euclid_study
from .io import dumps, write_text
from .kernels import KernelFamily, check_approximate_identity
from .linear import (
    LinearScalingFunction,
    LinearWaveletFamily,
    check_linear_admissibility,
    linear_reconstruct,
    linear_transform,
    linear_wavelet_from_kernel,
    reconstruction_multiplier,
)
from .scales import ALPHAS, ScaleGrid
from .zonal import HarmonicSpectrum

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CHECK_TYPES = ("auto", "ai", "bilinear", "linear")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str = ""
    n: int = 2
    L: int = 16
    rho_min: float = 1e-12
    rho_max: float = 1e3
    scales: int = 400
    alpha: str = "1/rho"
    family: str | None = None
    family_file: str | None = None
    seed: int = 0
    out: str | None = None
    format: str = "json"
    quiet: bool = False
    tol: float | None = None
    type: str = "auto"
    signal: str | None = None
    r_min: float = 0.1
    r_max: float = 5.0
    r_count: int = 50
    rho_smallest: float = 1e-3
    levels: int = 5

    def validate(self):
        def bad(name, why):
            raise ConfigError(f"field {name!r}: {why}")

        if self.n < 2:
            bad("n", "sphere dimension must be >= 2")
        if self.L < 0:
            bad("L", "truncation degree must be >= 0")
        if not (0 < self.rho_min < self.rho_max):
            bad("rho_min", "need 0 < rho_min < rho_max")
        if self.scales < 2:
            bad("scales", "need at least two scale nodes")
        if self.alpha not in ALPHAS:
            bad("alpha", f"unknown weight {self.alpha!r}; known: {sorted(ALPHAS)}")
        if self.format not in ("json", "csv"):
            bad("format", "must be 'json' or 'csv'")
        if self.type not in CHECK_TYPES:
            bad("type", f"must be one of {CHECK_TYPES}")
        if self.tol is not None and not self.tol > 0:
            bad("tol", "must be positive")
        if self.command in ("check", "roundtrip", "euclid") and not (self.family or self.family_file):
            bad("family", "give --family NAME or --family-file FILE")
        if self.family and self.family_file:
            bad("family", "--family and --family-file are mutually exclusive")
        if not (0 < self.r_min < self.r_max) or self.r_count < 2:
            bad("r_min", "need 0 < r_min < r_max and r_count >= 2")
        if not self.rho_smallest > 0 or self.levels < 3:
            bad("rho_smallest", "need rho_smallest > 0 and levels >= 3")

    def grid(self) -> ScaleGrid:
        return ScaleGrid(self.rho_min, self.rho_max, self.scales, self.alpha)


FIELD_NAMES = {f.name for f in fields(RunConfig)}


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    out = {}
    for key, value in data.items():
        name = key.replace("-", "_")
        if name not in FIELD_NAMES or name == "command":
            raise ConfigError(f"{path}: unknown field {key!r}")
        out[name] = value
    return out


def _coerce(cfg: dict) -> RunConfig:
    base = RunConfig()
    kw = {}
    for f in fields(RunConfig):
        if f.name not in cfg or cfg[f.name] is None:
            continue
        v = cfg[f.name]
        default = getattr(base, f.name)
        try:
            if isinstance(default, bool):
                if not isinstance(v, bool):
                    raise TypeError
            elif isinstance(default, int):
                if isinstance(v, bool) or int(v) != v:
                    raise TypeError
                v = int(v)
            elif isinstance(default, float) or f.name == "tol":
                v = float(v)
            elif not isinstance(v, str):
                raise TypeError
        except (TypeError, ValueError):
            raise ConfigError(f"field {f.name!r}: invalid value {v!r}") from None
        kw[f.name] = v
    return RunConfig(**{**asdict(base), **kw})


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default values for the flags")
    common.add_argument("--n", type=int, help="sphere dimension (S^n), default 2")
    common.add_argument("--L", type=int, help="truncation degree")
    common.add_argument("--rho-min", type=float, dest="rho_min")
    common.add_argument("--rho-max", type=float, dest="rho_max")
    common.add_argument("--scales", type=int, help="number of scale nodes")
    common.add_argument("--alpha", help="scale weight: 1/rho or 1")
    common.add_argument("--family", help="catalog name, see `catalog`")
    common.add_argument("--family-file", dest="family_file", help="JSON family description")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--quiet", action="store_true", default=None)
    common.add_argument("--tol", type=float)

    p = argparse.ArgumentParser(prog="sphwave", description="Continuous wavelet analysis on the n-sphere.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", parents=[common], help="approximate-identity or admissibility report")
    c.add_argument("--type", choices=CHECK_TYPES)
    r = sub.add_parser("roundtrip", parents=[common], help="transform and reconstruct a signal")
    r.add_argument("--signal", help="JSON spectrum {n, L, entries} instead of a random signal")
    e = sub.add_parser("euclid", parents=[common], help="Euclidean-limit study")
    e.add_argument("--r-min", type=float, dest="r_min")
    e.add_argument("--r-max", type=float, dest="r_max")
    e.add_argument("--r-count", type=int, dest="r_count")
    e.add_argument("--rho-smallest", type=float, dest="rho_smallest")
    e.add_argument("--levels", type=int)
    sub.add_parser("catalog", parents=[common], help="list the named families")
    return p


def resolve_config(args: argparse.Namespace) -> RunConfig:
    merged = load_config(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key in FIELD_NAMES and value is not None:
            merged[key] = value
    merged["command"] = args.command
    cfg = _coerce(merged)
    cfg.validate()
    return cfg


def load_family(cfg: RunConfig):
    try:
        if cfg.family_file:
            return catalog.load_family_file(cfg.family_file, cfg.n)
        return catalog.by_name(cfg.family, cfg.n)
    except catalog.CatalogError as exc:
        raise ConfigError(str(exc)) from None
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"family: {exc}") from None


# --------------------------------------------------------------------------
# commands


def _emit(cfg: RunConfig, report: dict, rows=None, header=None):
    if cfg.format == "csv":
        buf = io.StringIO()
        import csv

        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows or []:
            w.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])
        text = buf.getvalue()
    else:
        text = dumps(report)
    shown = write_text(text, cfg.out)
    if shown is not None:
        sys.stdout.write(shown)


def _log(cfg: RunConfig, msg: str):
    if not cfg.quiet:
        sys.stderr.write(msg + "\n")


def cmd_check(cfg: RunConfig) -> int:
    fam = load_family(cfg)
    kind = cfg.type
    if kind == "auto":
        kind = {"kernel": "ai", "bilinear": "bilinear", "linear": "linear"}[catalog.family_kind(fam)]
    if isinstance(fam, KernelFamily) and kind != "ai":
        fam = wavelet_from_kernel(fam, cfg.alpha) if kind == "bilinear" else linear_wavelet_from_kernel(fam, cfg.alpha)
    grid = cfg.grid()
    if kind == "ai":
        if isinstance(fam, LinearWaveletFamily):
            fam = LinearScalingFunction(fam, cfg.alpha, completed=True).kernel_family()
        elif isinstance(fam, WaveletFamily):
            fam = ScalingFunction(fam, cfg.alpha, completed=True).xi_family()
        rep = check_approximate_identity(fam, None, cfg.tol or 1e-3, cfg.L)
        out = rep.to_json()
        rows = list(zip(rep.degrees, rep.residuals, rep.extrapolated_residuals))
        header = ["l", "residual", "extrapolated_residual"]
    else:
        check = check_bilinear_admissibility if kind == "bilinear" else check_linear_admissibility
        rep = check(fam, grid, cfg.tol or 1e-6, cfg.L)
        if fam.order >= 0:
            rep.notes.append(f"order {fam.order}: condition 1 checked for l > {fam.order}")
        out = rep.to_json()
        rows = list(zip(rep.degrees, rep.integrals, rep.targets, rep.residuals))
        header = ["l", "integral", "target", "residual"]
    out["config"] = {"n": cfg.n, "L": cfg.L, "grid": grid.describe(), "type": kind}
    _emit(cfg, out, rows, header)
    _log(cfg, f"{out['family']}: {out['verdict']}")
    return EXIT_PASS if rep.passed else EXIT_FAIL


def _signal(cfg: RunConfig, order: int) -> tuple[HarmonicSpectrum, list]:
    notes = []
    if cfg.signal:
        try:
            with open(cfg.signal) as fh:
                f = HarmonicSpectrum.from_json(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"signal: {exc}") from None
        if f.dim.n != cfg.n:
            raise ConfigError(f"signal lives on S^{f.dim.n}, expected S^{cfg.n}")
        return f, notes
    f = HarmonicSpectrum.random(cfg.n, cfg.L, cfg.seed, min_degree=order + 1)
    if order >= 0:
        notes.append(f"random signal has vanishing moments up to degree {order}")
    return f, notes


def cmd_roundtrip(cfg: RunConfig) -> int:
    fam = load_family(cfg)
    if isinstance(fam, KernelFamily) or not fam.is_zonal:
        raise ConfigError("roundtrip needs a zonal wavelet family")
    linear = isinstance(fam, LinearWaveletFamily)
    grid = cfg.grid()
    f, notes = _signal(cfg, fam.order)
    lam = fam.lam
    keep = f.degrees > fam.order
    target = f.with_values(np.where(keep, f.values, 0))
    lost = float(np.sqrt(np.sum(np.abs(f.values[~keep]) ** 2)))
    if linear:
        rec = linear_reconstruct(linear_transform(f, fam, grid), fam, grid)
        mult = reconstruction_multiplier(fam, grid, f.L)
        iso_t = linear_transform
    else:
        rec = bilinear_synthesize(bilinear_transform(f, fam, grid), fam, grid)
        l = np.arange(f.L + 1)
        mult = (lam / (lam + l)) ** 2 * grid.integrate(np.abs(fam.table(grid.nodes, l)) ** 2)
        iso_t = bilinear_transform
    degrees = list(range(fam.order + 1, f.L + 1))
    per_degree = [float(abs(mult[j] - 1.0)) for j in degrees]
    tol = cfg.tol or 1e-3
    if target.norm() == 0:
        notes.append("signal has no components above the wavelet order: information lost, nothing to compare")
        err = 0.0
        _log(cfg, "warning: signal lies in the vanishing moments of the wavelet; information lost")
    else:
        err = relative_error(target, rec)
    if lost > 0:
        notes.append(f"components with l <= {fam.order} (norm {lost:.6g}) are not reconstructed")
    _, _, iso = isometry_check(target, target, fam, grid, transform=iso_t)
    if linear:
        notes.append("the linear transform is not an isometry; its residual is reported for information")
    ok = err < tol
    out = {"kind": "roundtrip", "family": fam.label, "n": cfg.n, "L": f.L, "seed": cfg.seed,
           "transform": "linear" if linear else "bilinear", "verdict": "pass" if ok else "fail", "tol": tol,
           "relative_l2_error": err, "isometry_residual": iso, "degrees": degrees,
           "per_degree_residuals": per_degree, "lost_norm": lost, "grid": grid.describe(), "notes": notes}
    _emit(cfg, out, list(zip(degrees, per_degree)), ["l", "residual"])
    _log(cfg, f"{fam.label}: relative L2 error {err:.3e} ({out['verdict']})")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_euclid(cfg: RunConfig) -> int:
    fam = load_family(cfg)
    if isinstance(fam, KernelFamily) or not fam.is_zonal:
        raise ConfigError("euclid needs a zonal wavelet family")
    r = np.linspace(cfg.r_min, cfg.r_max, cfg.r_count)
    kw = {}
    if cfg.tol is not None:
        kw["max_spread"] = cfg.tol
    rep = euclid_study(fam, r, euclid_scales(cfg.rho_smallest, cfg.levels), **kw)
    if cfg.format == "csv":
        shown = write_text(rep.to_csv(), cfg.out)
        if shown is not None:
            sys.stdout.write(shown)
    else:
        out = rep.to_json()
        out["config"] = {"n": cfg.n, "r": [cfg.r_min, cfg.r_max, cfg.r_count],
                         "rho_smallest": cfg.rho_smallest, "levels": cfg.levels}
        _emit(cfg, out)
    spread = rep.ratio_spread
    _log(cfg, f"{fam.label}: ratio spread {spread:.3e}" if math.isfinite(spread) else
         f"{fam.label}: {rep.precondition.get('reason', 'failed')}")
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_catalog(cfg: RunConfig) -> int:
    items = catalog.listing()
    _emit(cfg, {"families": items}, [(i["name"], i["kind"], i["coefficients"]) for i in items],
          ["name", "kind", "coefficients"])
    return EXIT_PASS


COMMANDS = {"check": cmd_check, "roundtrip": cmd_roundtrip, "euclid": cmd_euclid, "catalog": cmd_catalog}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_PASS
    try:
        cfg = resolve_config(args)
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        sys.stderr.write(f"sphwave: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
