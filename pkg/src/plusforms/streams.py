"""Recorded coefficient streams: sieving, normalization, file IO.

A stream holds the normalized coefficients b(n) = a(n) / n^((k-1)/2)
of one eigenform at the recorded indices: squarefree n <= X with
n = (-1)^l mod 4.  Real values carry ten certified significant digits,
produced from the exact coefficients through directed rounding, and the
whole stream is scaled by one constant so its first entry is exactly 1.

The file format is plain text: five header lines (label, two_k, ell,
bound, count), then one line per entry with the index, a tab, and the
value in scientific notation with ten significant digits.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
import numpy as np

from .errors import CertificateError, PrecisionError

_CERT_REL_WIDTH = 1e-11   # certifies 10 significant digits


def primes_up_to(x):
    if x < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(x + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(x ** 0.5) + 1):
        if mask[p]:
            mask[p * p::p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def squarefree_sieve(x):
    """Boolean mask of length x+1; entry n set iff n is squarefree."""
    if x < 1:
        raise ValueError("bound must be >= 1")
    mask = np.ones(x + 1, dtype=bool)
    mask[0] = False
    for p in primes_up_to(int(x ** 0.5)):
        step = int(p * p)
        mask[step::step] = False
    return mask


def recorded_indices(ell, x):
    """Ascending squarefree n <= x with n = (-1)^l mod 4.

    The 0 mod 4 class allowed by the plus condition contains no
    squarefree numbers, so one odd class remains.
    """
    residue = 1 if ell % 2 == 0 else 3
    mask = squarefree_sieve(x)
    n = np.arange(x + 1, dtype=np.int64)
    return n[mask & (n % 4 == residue)]


class CoeffStream:
    """Normalized coefficients of one form at recorded indices."""

    def __init__(self, label, two_k, ell, bound, indices, values):
        self.label = label
        self.two_k = two_k
        self.ell = ell
        self.bound = bound
        self.indices = np.asarray(indices, dtype=np.int64)
        self.values = np.asarray(values, dtype=np.float64)
        if len(self.indices) != len(self.values):
            raise ValueError("index/value length mismatch")

    def __len__(self):
        return len(self.indices)

    def __eq__(self, other):
        if not isinstance(other, CoeffStream):
            return NotImplemented
        return (self.label == other.label and self.two_k == other.two_k
                and self.ell == other.ell and self.bound == other.bound
                and np.array_equal(self.indices, other.indices)
                and len(self.values) == len(other.values)
                and all(format_value(a) == format_value(b)
                        for a, b in zip(self.values, other.values)))

    def __repr__(self):
        return (f"CoeffStream({self.label}, bound={self.bound}, "
                f"entries={len(self)})")


def format_value(v):
    return f"{v:.9e}"


class _Interval:
    """Directed-rounding mpfr interval helper."""

    def __init__(self, precision):
        self.down = gmpy2.context(precision=precision,
                                  round=gmpy2.RoundDown)
        self.up = gmpy2.context(precision=precision, round=gmpy2.RoundUp)

    def from_fraction(self, q):
        q = Fraction(q)
        with self.down:
            lo = gmpy2.mpfr(q.numerator) / q.denominator
        with self.up:
            hi = gmpy2.mpfr(q.numerator) / q.denominator
        return lo, hi

    def mul(self, a, b):
        cands_lo, cands_hi = [], []
        for x in (a[0], a[1]):
            for y in (b[0], b[1]):
                with self.down:
                    cands_lo.append(x * y)
                with self.up:
                    cands_hi.append(x * y)
        return min(cands_lo), max(cands_hi)

    def div(self, a, b):
        if not (b[0] > 0 or b[1] < 0):
            raise ZeroDivisionError("interval divides by zero")
        cands_lo, cands_hi = [], []
        for x in (a[0], a[1]):
            for y in (b[0], b[1]):
                with self.down:
                    cands_lo.append(x / y)
                with self.up:
                    cands_hi.append(x / y)
        return min(cands_lo), max(cands_hi)

    def root4_of_int(self, n):
        """Directed bounds of n**(1/4) for a positive integer n."""
        with self.down:
            lo = gmpy2.rootn(gmpy2.mpfr(n), 4)
        with self.up:
            hi = gmpy2.rootn(gmpy2.mpfr(n), 4)
        return lo, hi


def _certified(lo, hi):
    if not (gmpy2.is_finite(lo) and gmpy2.is_finite(hi)):
        return False
    if lo > hi:
        return False
    mid = abs(float(lo) + float(hi)) / 2
    if mid == 0:
        return False
    return float(hi) - float(lo) < _CERT_REL_WIDTH * mid


def normalize(form, bound):
    """Build the CoeffStream of a form up to the given bound.

    The exponent is (two_k - 2)/4; every value carries ten certified
    significant digits; the first entry is exactly 1.
    """
    if form.precision <= bound:
        raise PrecisionError(
            f"normalize to bound {bound} requires form precision > "
            f"{bound} (got {form.precision})")
    idx = recorded_indices(form.ell, bound)
    n0 = int(idx[0])
    a_n0 = form.raw_coefficients_at([n0])[0]
    if a_n0.is_zero():
        raise CertificateError(
            f"normalization index undefined: a({n0}) = 0")
    p = form.two_k - 2  # b(n) = a(n) / n^(p/4), stream scaled at n0
    raw = form.raw_coefficients_at([int(i) for i in idx])
    values = np.empty(len(idx), dtype=np.float64)
    values[0] = 1.0
    if form.field.degree == 1:
        _fill_rational(values, idx, raw, a_n0, n0, p)
    else:
        _fill_embedded(values, idx, raw, a_n0, n0, p, form.embedding)
    return CoeffStream(form.label, form.two_k, form.ell, bound, idx, values)


def _fill_rational(values, idx, raw, a_n0, n0, p):
    """b(n) = (a(n)/a(n0)) * (n0/n)^(p/4), exact rational fourth powers."""
    a0 = a_n0.as_rational()
    num0, den0 = a0.numerator, a0.denominator
    for pos in range(1, len(idx)):
        a = raw[pos].as_rational()
        if a == 0:
            values[pos] = 0.0
            continue
        n = int(idx[pos])
        sign = 1.0 if (a > 0) == (num0 > 0) else -1.0
        # |b|^4 = (a^4 n0^p den0^4) / (num0^4 n^p)
        top = (a.numerator ** 4) * (den0 ** 4) * (n0 ** p)
        bot = (a.denominator ** 4) * (num0 ** 4) * (n ** p)
        values[pos] = sign * _root4_ratio(abs(top), abs(bot))


def _root4_ratio(top, bot):
    precision = 96
    while precision <= 1024:
        iv = _Interval(precision)
        with iv.down:
            lo = gmpy2.rootn(gmpy2.mpfr(top) / gmpy2.mpfr(bot), 4)
        with iv.up:
            hi = gmpy2.rootn(gmpy2.mpfr(top) / gmpy2.mpfr(bot), 4)
        if _certified(lo, hi):
            return (float(lo) + float(hi)) / 2
        precision *= 2
    raise ArithmeticError("could not certify 10 digits for a value")


def _fill_embedded(values, idx, raw, a_n0, n0, p, embedding):
    precision = 128
    embedding = embedding.refined(40)
    iv = _Interval(precision)
    c0 = embedding.evaluate(a_n0, precision)
    scale = iv.div(iv.root4_of_int(n0 ** p), c0)  # n0^(p/4) / sigma(a(n0))
    for pos in range(1, len(idx)):
        if raw[pos].is_zero():
            values[pos] = 0.0
            continue
        n = int(idx[pos])
        local_emb, local_iv, local_scale = embedding, iv, scale
        local_prec = precision
        while True:
            num = local_emb.evaluate(raw[pos], local_prec)
            quot = local_iv.div(local_iv.mul(num, local_scale),
                                local_iv.root4_of_int(n ** p))
            if _certified(*quot):
                values[pos] = (float(quot[0]) + float(quot[1])) / 2
                break
            local_prec *= 2
            if local_prec > 4096:
                raise ArithmeticError(
                    f"could not certify 10 digits at index {n}")
            local_emb = local_emb.refined(local_prec // 3)
            local_iv = _Interval(local_prec)
            c0r = local_emb.evaluate(a_n0, local_prec)
            local_scale = local_iv.div(local_iv.root4_of_int(n0 ** p), c0r)


def write_stream(stream, path):
    with open(path, "w") as fh:
        fh.write(f"# label={stream.label}\n")
        fh.write(f"# two_k={stream.two_k}\n")
        fh.write(f"# ell={stream.ell}\n")
        fh.write(f"# bound={stream.bound}\n")
        fh.write(f"# count={len(stream)}\n")
        for n, v in zip(stream.indices, stream.values):
            fh.write(f"{n}\t{format_value(v)}\n")


def read_stream(path):
    headers = {}
    indices = []
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" not in body:
                    raise ValueError(
                        f"{path}:{lineno}: malformed header line")
                key, _, value = body.partition("=")
                headers[key.strip()] = value.strip()
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(
                    f"{path}:{lineno}: expected 'index<TAB>value'")
            try:
                indices.append(int(parts[0]))
                values.append(float(parts[1]))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    for key in ("label", "two_k", "ell", "bound", "count"):
        if key not in headers:
            raise ValueError(f"{path}: missing header '{key}'")
    count = int(headers["count"])
    if count != len(indices):
        raise ValueError(
            f"{path}: header count {count} does not match "
            f"{len(indices)} body lines")
    return CoeffStream(headers["label"], int(headers["two_k"]),
                       int(headers["ell"]), int(headers["bound"]),
                       np.array(indices, dtype=np.int64),
                       np.array(values, dtype=np.float64))


def subset_split(stream, count):
    """count consecutive pieces, earlier at most one entry longer."""
    if count < 1:
        raise ValueError("subset count must be >= 1")
    total = len(stream)
    q, r = divmod(total, count)
    out = []
    start = 0
    for j in range(count):
        size = q + (1 if j < r else 0)
        piece = CoeffStream(stream.label, stream.two_k, stream.ell,
                            stream.bound,
                            stream.indices[start:start + size],
                            stream.values[start:start + size])
        out.append(piece)
        start += size
    return out


def prime_filter(stream):
    """Entries at prime indices; values unchanged."""
    if len(stream) == 0:
        return CoeffStream(stream.label, stream.two_k, stream.ell,
                           stream.bound, [], [])
    top = int(stream.indices.max())
    primes = primes_up_to(top)
    mask = np.zeros(top + 1, dtype=bool)
    mask[primes] = True
    keep = mask[stream.indices]
    return CoeffStream(stream.label, stream.two_k, stream.ell,
                       stream.bound, stream.indices[keep],
                       stream.values[keep])
