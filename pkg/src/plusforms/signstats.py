"""Sign statistics and distribution distances.

Sign counts and positive fractions feed the equidistribution checks;
independence ratios with Wilson score intervals probe whether sign and
absolute value decouple on bands of |b(n)|; the Kolmogorov-Smirnov
distance compares the empirical distribution against a fitted density
normalized by adaptive Simpson quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Z95 = 1.959963984540054  # two-sided 95% normal quantile


@dataclass
class SignReport:
    n_pos: int
    n_neg: int
    n_zero: int

    @property
    def pos_fraction(self):
        signed = self.n_pos + self.n_neg
        if signed == 0:
            return None
        return self.n_pos / signed


def sign_report(values):
    values = np.asarray(values, dtype=np.float64)
    return SignReport(int(np.sum(values > 0)), int(np.sum(values < 0)),
                      int(np.sum(values == 0)))


def wilson_interval(successes, trials, z=Z95):
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        raise ValueError("no trials")
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * np.sqrt(phat * (1 - phat) / trials
                                 + z * z / (4 * trials * trials))
    return max(center - half, 0.0), min(center + half, 1.0)


@dataclass
class IndependenceRatio:
    lo: float
    hi: float
    n_in: int
    n_pos: int

    @property
    def ratio(self):
        return None if self.n_in == 0 else self.n_pos / self.n_in

    @property
    def wilson(self):
        if self.n_in == 0:
            return None
        return wilson_interval(self.n_pos, self.n_in)

    @property
    def has_data(self):
        return self.n_in > 0


def independence_ratio(values, lo, hi):
    """Fraction of positive signs among |v| in [lo, hi], inclusive."""
    if not (0 < lo <= hi):
        raise ValueError("interval must satisfy 0 < lo <= hi")
    values = np.asarray(values, dtype=np.float64)
    mags = np.abs(values)
    inside = (mags >= lo) & (mags <= hi)
    n_in = int(np.sum(inside))
    n_pos = int(np.sum(inside & (values > 0)))
    return IndependenceRatio(lo, hi, n_in, n_pos)


# ---------------------------------------------------------------------------
# quadrature and Kolmogorov-Smirnov distance
# ---------------------------------------------------------------------------

def _adaptive_simpson(f, lo, hi, rel_tol):
    """Panel list [(x0, x1, integral)] and the total, adaptively refined."""
    def simpson(x0, x1):
        m = 0.5 * (x0 + x1)
        return (x1 - x0) / 6 * (f(x0) + 4 * f(m) + f(x1)), m

    whole, _ = simpson(lo, hi)
    scale = max(abs(whole), 1e-300)
    panels = []
    stack = [(lo, hi, whole, 0)]
    while stack:
        x0, x1, estimate, depth = stack.pop()
        mid = 0.5 * (x0 + x1)
        left, _ = simpson(x0, mid)
        right, _ = simpson(mid, x1)
        better = left + right
        if depth >= 48 or abs(better - estimate) <= 15 * rel_tol * scale:
            refined = better + (better - estimate) / 15
            panels.append((x0, x1, refined))
            continue
        stack.append((mid, x1, right, depth + 1))
        stack.append((x0, mid, left, depth + 1))
    panels.sort()
    total = sum(p[2] for p in panels)
    return panels, total


def model_cdf_table(fit_result, rel_tol=1e-8):
    """Normalizing constant and cumulative panel table for GGG/GG fits.

    Raises on families without a finite normalizing integral.
    """
    tag = fit_result.model
    if tag not in ("GGG", "GG"):
        raise ValueError("cdf comparison is defined for GGG and GG fits")
    p = fit_result.params
    a, c = p["a"], p["c"]
    d = p.get("d", 0.0)
    if a <= 0 or c <= 0 or d < 0:
        raise ValueError(
            f"non-normalizable parameters for {tag}: a={a}, c={c}, d={d}")

    def density(t):
        return float(np.exp(-((d + t * t) ** a) / c))

    # tail cut where the exponent passes ln(1e22)
    tail = (c * np.log(1e22)) ** (1 / (2 * a))
    cut = float(np.sqrt(max(tail * tail - d, tail * tail / 4)))
    panels, half = _adaptive_simpson(density, 0.0, cut, rel_tol)
    return _CdfTable(density, panels, 2 * half)


class _CdfTable:
    def __init__(self, density, panels, normalizer):
        self.density = density
        self.starts = np.array([p[0] for p in panels])
        self.ends = np.array([p[1] for p in panels])
        self.cums = np.concatenate([[0.0],
                                    np.cumsum([p[2] for p in panels])])
        self.normalizer = normalizer
        self.limit = float(self.ends[-1])

    def half_integral(self, xs):
        """Integral of the density over [0, x] for x >= 0, vectorized."""
        xs = np.minimum(np.asarray(xs, dtype=np.float64), self.limit)
        pos = np.searchsorted(self.ends, xs, side="left")
        pos = np.minimum(pos, len(self.ends) - 1)
        base = self.cums[pos]
        x0 = self.starts[pos]
        mids = 0.5 * (x0 + xs)
        f0 = np.array([self.density(v) for v in x0])
        fm = np.array([self.density(v) for v in mids])
        fx = np.array([self.density(v) for v in xs])
        partial = (xs - x0) / 6 * (f0 + 4 * fm + fx)
        return base + partial

    def cdf(self, xs):
        xs = np.asarray(xs, dtype=np.float64)
        half = self.half_integral(np.abs(xs))
        return 0.5 + np.sign(xs) * half / self.normalizer


def cdf_distance(values, fit_result, rel_tol=1e-8):
    """Kolmogorov-Smirnov distance between the empirical distribution
    of the values and the fitted model as a probability density."""
    values = np.sort(np.asarray(values, dtype=np.float64))
    n = len(values)
    if n == 0:
        raise ValueError("no values")
    table = model_cdf_table(fit_result, rel_tol)
    model = table.cdf(values)
    steps_lo = np.arange(n) / n
    steps_hi = np.arange(1, n + 1) / n
    return float(np.max(np.maximum(np.abs(model - steps_lo),
                                   np.abs(model - steps_hi))))


def empirical_cdf_distance(sample_a, sample_b):
    """Two-sample Kolmogorov-Smirnov distance, exact sup over steps."""
    a = np.sort(np.asarray(sample_a, dtype=np.float64))
    b = np.sort(np.asarray(sample_b, dtype=np.float64))
    if len(a) == 0 or len(b) == 0:
        raise ValueError("empty sample")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / len(a)
    fb = np.searchsorted(b, grid, side="right") / len(b)
    return float(np.max(np.abs(fa - fb)))
