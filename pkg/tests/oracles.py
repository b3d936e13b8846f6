"""Independent reference implementations used by the tests."""
import mpmath


def gegenbauer_series(l, lam, t, dps=40):
    """C_l^lam(t) = sum_k (-1)^k Gamma(l-k+lam) / (Gamma(lam) k! (l-2k)!) (2t)^(l-2k)."""
    with mpmath.workdps(dps):
        lam, t = mpmath.mpf(lam), mpmath.mpf(t)
        s = mpmath.mpf(0)
        for k in range(l // 2 + 1):
            s += ((-1) ** k * mpmath.gamma(l - k + lam)
                  / (mpmath.gamma(lam) * mpmath.factorial(k) * mpmath.factorial(l - 2 * k))
                  * (2 * t) ** (l - 2 * k))
        return float(s)
