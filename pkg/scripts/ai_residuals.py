"""Approximate-identity residual max_{l<=L} |K_rho(l) - (lam+l)/lam| as rho shrinks.

Both kernels are analytic in rho, so the residual is (lam+l)/lam (1 - e^{-l rho})
for Abel-Poisson and the same with l(l+2 lam) in the exponent for
Gauss-Weierstrass. The table shows where it falls below a tolerance.
"""
import argparse

import numpy as np

from sphwave.kernels import abel_poisson_family, gauss_weierstrass_family


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--L", type=int, default=16)
    ap.add_argument("--tol", type=float, default=1e-3)
    args = ap.parse_args()
    rhos = 10.0 ** np.arange(-3, -10, -1)
    l = np.arange(args.L + 1)
    print("rho        " + "  ".join(f"{f'AP n={n}':>10s} {f'GW n={n}':>10s}" for n in args.n))
    for rho in rhos:
        row = []
        for n in args.n:
            lam = (n - 1) / 2
            for fam in (abel_poisson_family(n), gauss_weierstrass_family(n)):
                row.append(float(np.max(np.abs(fam.coefficients(rho, l) - (lam + l) / lam))))
        marks = "  ".join(f"{v:10.2e}{'*' if v < args.tol else ' '}" for v in row)
        print(f"{rho:8.0e}   {marks}")
    print(f"* below tol = {args.tol:g}")


if __name__ == "__main__":
    main()
