"""Number field arithmetic and exact linear algebra over Q[x]/(f).

Elements are coordinate vectors in the power basis 1, x, ..., x^(d-1)
with Fraction entries.  Division goes through the extended Euclidean
algorithm, so the arithmetic also works in a quotient ring by a
reducible modulus as long as no zero divisor must be inverted; the
NumberField constructor certifies irreducibility by default and the
eigenform pipeline always runs over certified fields.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2

from .errors import CertificateError
from .polynomials import (RootInterval, charpoly, is_irreducible,
                          isolate_real_roots, poly_degree, poly_divmod,
                          poly_eval, poly_trim, sturm_chain, sturm_count)


class NumberField:
    """Q[x]/(min_poly) for a monic polynomial over the rationals."""

    def __init__(self, min_poly, certify=True):
        mp = [Fraction(c) for c in poly_trim(min_poly)]
        if poly_degree(mp) < 1:
            raise ValueError("min_poly must be nonconstant")
        if mp[-1] != 1:
            mp = [c / mp[-1] for c in mp]
        self.min_poly = tuple(mp)
        self.degree = len(mp) - 1
        self.certified = False
        if certify:
            if not is_irreducible(list(mp)):
                raise CertificateError(
                    f"min_poly {mp} is reducible over the rationals")
            self.certified = True
        # reduction table for x^k, k = d .. 2d-2
        d = self.degree
        self._red = []
        current = [-c for c in mp[:-1]]  # x^d
        self._red.append(tuple(current))
        for _ in range(d - 2):
            current = [Fraction(0)] + current
            top = current[d]
            current = current[:d]
            if top:
                current = [c + top * r for c, r in
                           zip(current, self._red[0])]
            self._red.append(tuple(current))

    def __eq__(self, other):
        return isinstance(other, NumberField) and \
            self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"NumberField(degree={self.degree})"

    def zero(self):
        return AlgebraicNumber(self, [0] * self.degree)

    def one(self):
        return AlgebraicNumber(self, [1] + [0] * (self.degree - 1))

    def generator(self):
        coords = [0] * self.degree
        if self.degree == 1:
            # x is congruent to the rational root of the linear min_poly
            return AlgebraicNumber(self, [-self.min_poly[0]])
        coords[1] = 1
        return AlgebraicNumber(self, coords)

    def from_rational(self, value):
        coords = [Fraction(value)] + [Fraction(0)] * (self.degree - 1)
        return AlgebraicNumber(self, coords)

    def element(self, coords):
        return AlgebraicNumber(self, coords)

    def _reduce(self, coeffs):
        """Reduce a coefficient list of length <= 2d-1 modulo min_poly."""
        d = self.degree
        out = [Fraction(c) for c in coeffs[:d]]
        out.extend([Fraction(0)] * (d - len(out)))
        for k in range(d, len(coeffs)):
            c = coeffs[k]
            if c:
                red = self._red[k - d]
                for i, r in enumerate(red):
                    out[i] += c * r
        return out

    def real_embeddings(self, digits=12):
        """All real roots of min_poly as RealEmbedding, sorted ascending."""
        roots = isolate_real_roots(list(self.min_poly), digits)
        return [RealEmbedding(self, r, digits) for r in roots]


class AlgebraicNumber:
    """An element of a NumberField in power-basis coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        coords = [Fraction(c) for c in coords]
        if len(coords) != field.degree:
            raise ValueError(
                f"expected {field.degree} coordinates, got {len(coords)}")
        self.field = field
        self.coords = tuple(coords)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self == self.field.from_rational(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coords))

    def __repr__(self):
        return f"AlgebraicNumber({list(self.coords)})"

    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field != self.field:
                raise ValueError("mixed number fields")
            return other
        return self.field.from_rational(other)

    def __add__(self, other):
        other = self._coerce(other)
        return AlgebraicNumber(self.field,
                               [a + b for a, b in
                                zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.field,
                                   [a * other for a in self.coords])
        other = self._coerce(other)
        prod = [Fraction(0)] * (2 * self.field.degree - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        prod[i + j] += a * b
        return AlgebraicNumber(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # invert poly a modulo min_poly: find u with a*u + m*v = gcd
        a = list(poly_trim(list(self.coords)))
        m = list(self.field.min_poly)
        r0, r1 = m, a
        s0, s1 = [], [Fraction(1)]
        while poly_trim(r1):
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            # s_new = s0 - q*s1
            qs = _poly_mul_frac(q, s1)
            s_new = _poly_sub(s0, qs)
            s0, s1 = s1, s_new
        r0 = poly_trim(r0)
        if poly_degree(r0) != 0:
            raise ZeroDivisionError(
                "element is a zero divisor in the quotient ring")
        inv = [c / r0[0] for c in s0]
        inv = self.field._reduce(inv + [Fraction(0)])
        return AlgebraicNumber(self.field, inv)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result


def _poly_mul_frac(f, g):
    if not f or not g:
        return []
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out


def _poly_sub(f, g):
    n = max(len(f), len(g))
    f = list(f) + [Fraction(0)] * (n - len(f))
    g = list(g) + [Fraction(0)] * (n - len(g))
    return [a - b for a, b in zip(f, g)]


class RealEmbedding:
    """One real root of a field's minimal polynomial, certified.

    The isolating interval (lo, hi) contains exactly one real root,
    certified by a sign change and a Sturm count of one, with relative
    width below 10**-digits.
    """

    def __init__(self, field, interval: RootInterval, digits):
        if digits < 10:
            raise ValueError("embeddings must carry >= 10 certified digits")
        self.field = field
        self.interval = interval
        self.digits = digits
        mp = list(field.min_poly)
        lo, hi = interval.lo, interval.hi
        if lo != hi:
            flo, fhi = poly_eval(mp, lo), poly_eval(mp, hi)
            if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
                raise CertificateError("embedding interval lacks sign change")
            if sturm_count(sturm_chain(mp), lo, hi) != 1:
                raise CertificateError("embedding interval is not isolating")

    def __repr__(self):
        return f"RealEmbedding(~{float(self.interval.midpoint()):.12g})"

    def bounds(self, precision_bits=96):
        """Directed mpfr bounds (lo, hi) for the root."""
        down = gmpy2.context(precision=precision_bits,
                             round=gmpy2.RoundDown)
        up = gmpy2.context(precision=precision_bits, round=gmpy2.RoundUp)
        lo, hi = self.interval.lo, self.interval.hi
        with down:
            blo = gmpy2.mpfr(lo.numerator) / gmpy2.mpfr(lo.denominator)
        with up:
            bhi = gmpy2.mpfr(hi.numerator) / gmpy2.mpfr(hi.denominator)
        return blo, bhi

    def evaluate(self, value, precision_bits=96):
        """Directed mpfr bounds for an element under this embedding."""
        if isinstance(value, AlgebraicNumber):
            coords = value.coords
        else:
            coords = (Fraction(value),)
        rlo, rhi = self.bounds(precision_bits)
        ctx_down = gmpy2.context(precision=precision_bits,
                                 round=gmpy2.RoundDown)
        ctx_up = gmpy2.context(precision=precision_bits,
                               round=gmpy2.RoundUp)
        lo, hi = gmpy2.mpfr(0), gmpy2.mpfr(0)
        for c in reversed(coords):
            # interval multiply by [rlo, rhi] then add c
            cands_lo = []
            cands_hi = []
            for a, r in ((lo, rlo), (lo, rhi), (hi, rlo), (hi, rhi)):
                with ctx_down:
                    cands_lo.append(a * r)
                with ctx_up:
                    cands_hi.append(a * r)
            num, den = Fraction(c).numerator, Fraction(c).denominator
            with ctx_down:
                lo = min(cands_lo) + gmpy2.mpfr(num) / den
            with ctx_up:
                hi = max(cands_hi) + gmpy2.mpfr(num) / den
        return lo, hi

    def float_value(self, value):
        lo, hi = self.evaluate(value)
        return (float(lo) + float(hi)) / 2

    def refined(self, digits):
        """A new embedding of the same root with a tighter interval."""
        if digits <= self.digits:
            return self
        mp = list(self.field.min_poly)
        lo, hi = self.interval.lo, self.interval.hi
        if lo == hi:
            return self
        flo = poly_eval(mp, lo)
        target = Fraction(1, 10 ** digits)
        while not (lo * hi > 0 and
                   (hi - lo) < target * min(abs(lo), abs(hi))):
            mid = (lo + hi) / 2
            fm = poly_eval(mp, mid)
            if fm == 0:
                eps = (hi - lo) / 1024
                lo, hi = mid - eps, mid + eps
                flo = poly_eval(mp, lo)
                continue
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
        return RealEmbedding(self.field, RootInterval(lo, hi), digits)


def kernel_vector(matrix, field):
    """A kernel vector of a d x d matrix with rank d-1 over the field.

    Exact Gauss-Jordan elimination; the result is scaled so its first
    nonzero coordinate is 1.  Raises CertificateError when the nullity
    is not exactly one.
    """
    d = len(matrix)
    m = [[field.element(x.coords) if isinstance(x, AlgebraicNumber)
          else field.from_rational(x) for x in row] for row in matrix]
    if any(len(row) != d for row in m):
        raise ValueError("kernel_vector requires a square matrix")

    pivots = {}
    rank = 0
    for col in range(d):
        pivot_row = None
        for r in range(d):
            if r in pivots.values():
                continue
            if not m[r][col].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            continue
        inv = m[pivot_row][col].inverse()
        m[pivot_row] = [x * inv for x in m[pivot_row]]
        for r in range(d):
            if r != pivot_row and not m[r][col].is_zero():
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in
                        zip(m[r], m[pivot_row])]
        pivots[col] = pivot_row
        rank += 1

    if rank != d - 1:
        raise CertificateError(
            f"unexpected eigenspace dimension: nullity {d - rank}, "
            f"expected 1")
    free_col = next(c for c in range(d) if c not in pivots)
    v = [field.zero() for _ in range(d)]
    v[free_col] = field.one()
    for col, row in pivots.items():
        v[col] = -m[row][free_col]
    # scale so the first nonzero coordinate is 1
    first = next(x for x in v if not x.is_zero())
    inv = first.inverse()
    return [x * inv for x in v]


def eigen_decompose(matrix):
    """Split a rational Hecke matrix into an eigen datum.

    Returns (g, K, v) where g is the characteristic polynomial
    (ascending coefficients, monic), K = Q[x]/(g) is the certified
    number field, and v is a kernel vector of (M - x*I) over K, scaled
    to leading coordinate 1.  Aborts with CertificateError when g is
    reducible (undetermined counts as failure), not squarefree, or the
    eigenspace is not one dimensional.
    """
    g = charpoly(matrix)
    from .polynomials import poly_derivative, poly_gcd
    if poly_degree(poly_gcd(g, poly_derivative(g))) > 0:
        raise CertificateError(
            "characteristic polynomial has repeated roots; expected "
            "semisimple Hecke action")
    if not is_irreducible(g):
        raise CertificateError(
            f"characteristic polynomial {g} is reducible: more than one "
            f"Hecke orbit, contrary to the single-orbit expectation")
    field = NumberField(g)
    x = field.generator()
    d = len(matrix)
    shifted = [[field.from_rational(matrix[i][j]) - (x if i == j else 0)
                for j in range(d)] for i in range(d)]
    v = kernel_vector(shifted, field)
    return g, field, v
