"""Dense q-expansions with exact coefficients.

An ExactSeries holds coefficients of q^0 .. q^(precision-1) as exact
numbers: Python ints where possible, fractions.Fraction otherwise.  No
floating point enters this module.

Multiplication uses schoolbook convolution below SCHOOLBOOK_THRESHOLD
terms and Kronecker substitution above it: the integer coefficient
vectors are packed into single big integers (fixed bit-width slots) and
multiplied once through gmpy2, which is asymptotically fast.  Signed
inputs are split into positive and negative parts so the packed slots
stay non-negative.  Rational inputs are cleared to a common denominator
first.  All paths return identical, exact results.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import gmpy2

from .errors import PrecisionError

SCHOOLBOOK_THRESHOLD = 64


class ExactSeries:
    """A truncated power series sum_{n<precision} c_n q^n with exact c_n."""

    __slots__ = ("coeffs", "precision")

    def __init__(self, coeffs, precision=None):
        coeffs = list(coeffs)
        if precision is None:
            precision = len(coeffs)
        if precision <= 0:
            raise ValueError("precision must be positive")
        if len(coeffs) < precision:
            coeffs.extend([0] * (precision - len(coeffs)))
        elif len(coeffs) > precision:
            coeffs = coeffs[:precision]
        self.coeffs = coeffs
        self.precision = precision

    @classmethod
    def one(cls, precision):
        c = [0] * precision
        c[0] = 1
        return cls(c, precision)

    @classmethod
    def zero(cls, precision):
        return cls([0] * precision, precision)

    def __eq__(self, other):
        if not isinstance(other, ExactSeries):
            return NotImplemented
        return (self.precision == other.precision
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    def __hash__(self):
        return hash((self.precision, tuple(self.coeffs[:16])))

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.precision > 6 else ""
        return f"ExactSeries([{head}{tail}], precision={self.precision})"

    def __getitem__(self, n):
        return self.coeffs[n]

    def truncate(self, n):
        if n > self.precision:
            raise PrecisionError(
                f"cannot extend precision {self.precision} to {n}")
        return ExactSeries(self.coeffs[:n], n)

    def valuation(self):
        """Index of the first nonzero coefficient, or None if zero."""
        for n, c in enumerate(self.coeffs):
            if c != 0:
                return n
        return None

    def scale(self, factor):
        return ExactSeries([factor * c for c in self.coeffs], self.precision)

    def add(self, other):
        n = min(self.precision, other.precision)
        return ExactSeries([a + b for a, b in
                            zip(self.coeffs[:n], other.coeffs[:n])], n)

    def sub(self, other):
        n = min(self.precision, other.precision)
        return ExactSeries([a - b for a, b in
                            zip(self.coeffs[:n], other.coeffs[:n])], n)

    def is_integral(self):
        return all(isinstance(c, int) or
                   (isinstance(c, Fraction) and c.denominator == 1)
                   for c in self.coeffs)


def _schoolbook(a, b, n):
    out = [0] * n
    for i, ai in enumerate(a[:n]):
        if ai:
            hi = n - i
            for j, bj in enumerate(b[:hi]):
                if bj:
                    out[i + j] += ai * bj
    return out


def _pack(ints, width_bits):
    nbytes = width_bits // 8
    buf = bytearray(len(ints) * nbytes)
    for i, c in enumerate(ints):
        buf[i * nbytes:(i + 1) * nbytes] = c.to_bytes(nbytes, "little")
    return gmpy2.mpz(int.from_bytes(buf, "little"))


def _unpack(value, count, width_bits):
    nbytes = width_bits // 8
    blob = int(value).to_bytes(count * nbytes, "little")
    return [int.from_bytes(blob[i * nbytes:(i + 1) * nbytes], "little")
            for i in range(count)]


def _kronecker_nonneg(a, b, n):
    """Convolution of non-negative int lists, truncated to n terms."""
    max_a = max(a, default=0)
    max_b = max(b, default=0)
    if max_a == 0 or max_b == 0:
        return [0] * n
    terms = min(len(a), len(b))
    width = (max_a.bit_length() + max_b.bit_length()
             + (terms - 1).bit_length() + 1)
    width = (width + 7) // 8 * 8
    prod = _pack(a, width) * _pack(b, width)
    prod &= (gmpy2.mpz(1) << (n * width)) - 1
    return _unpack(prod, n, width)


def _int_mul(a, b, n):
    """Exact convolution of signed int lists, truncated to n terms."""
    if min(a, default=0) >= 0 and min(b, default=0) >= 0:
        return _kronecker_nonneg(a, b, n)
    ap = [c if c > 0 else 0 for c in a]
    an = [-c if c < 0 else 0 for c in a]
    bp = [c if c > 0 else 0 for c in b]
    bn = [-c if c < 0 else 0 for c in b]
    pos1 = _kronecker_nonneg(ap, bp, n)
    pos2 = _kronecker_nonneg(an, bn, n)
    neg1 = _kronecker_nonneg(ap, bn, n)
    neg2 = _kronecker_nonneg(an, bp, n)
    return [p1 + p2 - m1 - m2
            for p1, p2, m1, m2 in zip(pos1, pos2, neg1, neg2)]


def _clear_denominators(coeffs):
    denom = 1
    for c in coeffs:
        if isinstance(c, Fraction):
            d = c.denominator
            denom = denom // gcd(denom, d) * d
    ints = []
    for c in coeffs:
        if isinstance(c, Fraction):
            ints.append(int(c * denom))
        else:
            ints.append(c * denom)
    return ints, denom


def series_mul(a, b, n):
    """Product of two series truncated to precision n, exact.

    Requires both inputs to carry at least n terms.
    """
    if a.precision < n or b.precision < n:
        raise PrecisionError(
            f"series_mul at precision {n} requires both operands to have "
            f"precision >= {n} (got {a.precision} and {b.precision})")
    ca, cb = a.coeffs[:n], b.coeffs[:n]
    if n < SCHOOLBOOK_THRESHOLD:
        return ExactSeries(_schoolbook(ca, cb, n), n)
    ia, da = _clear_denominators(ca)
    ib, db = _clear_denominators(cb)
    prod = _int_mul(ia, ib, n)
    d = da * db
    if d == 1:
        return ExactSeries(prod, n)
    return ExactSeries([Fraction(c, d) for c in prod], n)


def series_pow(a, e, n):
    """a**e truncated to precision n by binary exponentiation."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    if a.precision < n:
        raise PrecisionError(
            f"series_pow at precision {n} requires operand precision >= {n} "
            f"(got {a.precision})")
    result = ExactSeries.one(n)
    base = a.truncate(n)
    while e:
        if e & 1:
            result = series_mul(result, base, n)
        e >>= 1
        if e:
            base = series_mul(base, base, n)
    return result
