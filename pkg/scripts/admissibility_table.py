"""Admissibility residuals of every catalog wavelet on S^2 and S^3."""
import argparse

from sphwave import catalog
from sphwave.bilinear import check_bilinear_admissibility
from sphwave.linear import LinearWaveletFamily, check_linear_admissibility
from sphwave.scales import ScaleGrid

NAMES = ["abel-poisson-wavelet", "gauss-weierstrass-wavelet", "gauss-weierstrass-linear",
         "poisson-multipole:1", "poisson-multipole:2", "poisson-multipole:3",
         "mexican-needlet:1:bilinear", "mexican-needlet:2:bilinear",
         "mexican-needlet:1:linear", "mexican-needlet:2:linear"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=int, default=16)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3])
    args = ap.parse_args()
    grid = ScaleGrid()
    print(f"{'family':30s} {'n':>2s} {'max residual':>13s} {'max rel.':>10s} {'sup|Xi|_1':>10s}  verdict")
    for n in args.dims:
        for name in NAMES:
            fam = catalog.by_name(name, n)
            check = check_linear_admissibility if isinstance(fam, LinearWaveletFamily) else check_bilinear_admissibility
            rep = check(fam, grid, 1e-6, args.L)
            rel = max(r / t for r, t in zip(rep.residuals, rep.targets))
            print(f"{name:30s} {n:2d} {rep.max_residual:13.2e} {rel:10.1e} {rep.xi_l1_sup:10.4f}  "
                  f"{'pass' if rep.passed else 'fail'}")


if __name__ == "__main__":
    main()
