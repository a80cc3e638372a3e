"""q-expansions of the generator forms.

theta (weight 1/2 on Gamma0(4)), F (weight 2 on Gamma0(4), the odd
sigma_1 series), and the level-one forms E4, E6 and Delta.  All series
have integer coefficients and are produced directly from divisor sums
or square counts, so they double as independent oracles for the
multiplication engine.
"""

from __future__ import annotations

from math import isqrt

import numpy as np

from .series import ExactSeries, series_mul


def theta_coefficients(n):
    """theta = 1 + 2 sum_{m>=1} q^(m^2), as an int list of length n."""
    c = [0] * n
    c[0] = 1
    m = 1
    while m * m < n:
        c[m * m] = 2
        m += 1
    return c


def theta_series(n):
    return ExactSeries(theta_coefficients(n), n)


def f_weight2_numpy(n):
    """Coefficients of F: sigma_1(m) for odd m, else 0 (numpy int64).

    Sieved over odd divisors only; sigma_1(m) < 2**63 holds far beyond
    any precision this package reaches.
    """
    out = np.zeros(n, dtype=np.int64)
    if n <= 1:
        return out
    half = n // 2  # number of odd integers below n
    # start from the contributions of the divisors m and 1
    sig = np.arange(2, 2 * half + 1, 2, dtype=np.int64)
    sig[0] = 1
    for d in range(3, n // 3 + 1, 2):
        first = (d - 1) // 2 + d  # index of 3d among odd slots
        if first >= half:
            break
        sig[first::d] += d
    out[1::2] = sig
    return out


def f_weight2_series(n):
    return ExactSeries([int(x) for x in f_weight2_numpy(n)], n)


def _divisor_power_sums(n, power):
    out = [0] * n
    for d in range(1, n):
        dp = d ** power
        for m in range(d, n, d):
            out[m] += dp
    return out


def eisenstein4(n):
    """E4 = 1 + 240 sum sigma_3(m) q^m."""
    s3 = _divisor_power_sums(n, 3)
    c = [240 * x for x in s3]
    c[0] = 1
    return ExactSeries(c, n)


def eisenstein6(n):
    """E6 = 1 - 504 sum sigma_5(m) q^m."""
    s5 = _divisor_power_sums(n, 5)
    c = [-504 * x for x in s5]
    c[0] = 1
    return ExactSeries(c, n)


def delta_series(n):
    """Delta = (E4^3 - E6^2)/1728, the weight 12 cusp form."""
    e4 = eisenstein4(n)
    e6 = eisenstein6(n)
    e4cubed = series_mul(series_mul(e4, e4, n), e4, n)
    e6sq = series_mul(e6, e6, n)
    coeffs = []
    for a, b in zip(e4cubed.coeffs, e6sq.coeffs):
        num = a - b
        if num % 1728:
            raise AssertionError("Delta coefficients must be integral")
        coeffs.append(num // 1728)
    return ExactSeries(coeffs, n)


def tau(n_max):
    """Ramanujan tau values tau(1..n_max) from the Delta expansion."""
    d = delta_series(n_max + 1)
    return d.coeffs[1:n_max + 1]


def r_k_bruteforce(k, n):
    """Representation counts by k squares, brute force (test oracle)."""
    counts = [0] * n
    bound = isqrt(n - 1)

    def rec(depth, total):
        if depth == 0:
            if total < n:
                counts[total] += 1
            return
        for v in range(-bound, bound + 1):
            t = total + v * v
            if t < n:
                rec(depth - 1, t)
    rec(k, 0)
    return counts
