"""Residual of the stereographically dilated Abel-Poisson profile versus a and the profile width rho0."""
import argparse

import numpy as np

from sphwave.dilation import dilation_family
from sphwave.kernels import abel_poisson_family


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=int, default=16)
    ap.add_argument("--rho0", type=float, nargs="+", default=[1.0, 0.5, 0.35, 0.2, 0.1])
    ap.add_argument("--a", type=float, nargs="+", default=[1e-1, 1e-2, 1e-3, 1e-4])
    args = ap.parse_args()
    l = np.arange(args.L + 1)
    for n in (2, 3):
        lam = (n - 1) / 2
        base = abel_poisson_family(n)
        print(f"S^{n}: max_(l<={args.L}) |f^a(l) - (lam+l)/lam|")
        print("rho0   " + "".join(f"{f'a={a:g}':>11s}" for a in args.a))
        for r0 in args.rho0:
            fam = dilation_family(lambda t, r0=r0: base.values(r0, t).real, n)
            vals = [np.max(np.abs(fam.coefficients(a, l) - (lam + l) / lam)) for a in args.a]
            print(f"{r0:5.2f}  " + "".join(f"{v:11.2e}" for v in vals))
        print()


if __name__ == "__main__":
    main()
