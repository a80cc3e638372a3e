"""Exact univariate polynomial arithmetic over the rationals.

Polynomials are plain lists of coefficients in ascending degree order
(ints or Fractions).  This module provides the characteristic
polynomial of a rational matrix, an irreducibility test with explicit
certificates, Sturm sequences, and certified real root isolation.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import IrreducibilityUndetermined

IRREDUCIBILITY_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                         47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101,
                         103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
                         157, 163, 167, 173, 179, 181)


def poly_trim(f):
    while f and f[-1] == 0:
        f = f[:-1]
    return f


def poly_degree(f):
    f = poly_trim(f)
    return len(f) - 1 if f else -1


def poly_eval(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def poly_derivative(f):
    return [i * c for i, c in enumerate(f)][1:]


def poly_mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] += a * b
    return out


def poly_divmod(f, g):
    """Exact division with remainder over the rationals."""
    g = poly_trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = [Fraction(c) for c in poly_trim(f)]
    lead = Fraction(g[-1])
    dg = len(g) - 1
    quot = [Fraction(0)] * max(len(f) - dg, 0)
    while len(f) - 1 >= dg and f:
        c = f[-1] / lead
        k = len(f) - 1 - dg
        quot[k] = c
        for i, gi in enumerate(g):
            f[k + i] -= c * gi
        f = poly_trim(f)
    return quot, f


def poly_gcd(f, g):
    """Monic greatest common divisor over the rationals."""
    a = [Fraction(c) for c in poly_trim(f)]
    b = [Fraction(c) for c in poly_trim(g)]
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def poly_primitive(f):
    """Integer polynomial equal to f up to a positive rational factor."""
    f = poly_trim(f)
    if not f:
        return []
    denom = 1
    for c in f:
        d = Fraction(c).denominator
        denom = denom // gcd(denom, d) * d
    ints = [int(Fraction(c) * denom) for c in f]
    content = 0
    for c in ints:
        content = gcd(content, abs(c))
    ints = [c // content for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def charpoly(matrix):
    """det(x*I - M) of a square rational matrix, exact.

    Uses the Faddeev-LeVerrier recursion; returns coefficients
    ascending, monic of degree d.
    """
    d = len(matrix)
    if any(len(row) != d for row in matrix):
        raise ValueError("charpoly requires a square matrix")
    m = [[Fraction(x) for x in row] for row in matrix]
    # c[k] holds the coefficient of x^(d-k)
    down = [Fraction(1)]
    work = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    for k in range(1, d + 1):
        work = [[sum(m[i][t] * work[t][j] for t in range(d))
                 for j in range(d)] for i in range(d)]
        ck = -sum(work[i][i] for i in range(d)) / k
        down.append(ck)
        for i in range(d):
            work[i][i] += ck
    return list(reversed(down))


# ---------------------------------------------------------------------------
# irreducibility over Q via reduction mod small primes
# ---------------------------------------------------------------------------

def _mod_trim(f, p):
    f = [c % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def _mod_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return out


def _mod_rem(f, g, p):
    f = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], p - 2, p)
    while len(f) - 1 >= dg:
        c = f[-1] * inv % p
        k = len(f) - 1 - dg
        for i, gi in enumerate(g):
            f[k + i] = (f[k + i] - c * gi) % p
        while f and f[-1] == 0:
            f.pop()
        if not f:
            break
    return f


def _mod_gcd(f, g, p):
    a, b = _mod_trim(f, p), _mod_trim(g, p)
    while b:
        a, b = b, _mod_rem(a, b, p)
    return a


def _mod_pow_x(q, modulus, p):
    """x^q modulo (modulus, p) by square and multiply."""
    result = [1]
    base = _mod_rem([0, 1], modulus, p)
    while q:
        if q & 1:
            result = _mod_rem(_mod_mul(result, base, p), modulus, p)
        q >>= 1
        if q:
            base = _mod_rem(_mod_mul(base, base, p), modulus, p)
    return result


def _mod_quo(f, g, p):
    """Exact quotient f / g over F_p (remainder must vanish)."""
    f = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], p - 2, p)
    quo = [0] * (len(f) - dg)
    while len(f) - 1 >= dg:
        c = f[-1] * inv % p
        quo[len(f) - 1 - dg] = c
        k = len(f) - 1 - dg
        for i, gi in enumerate(g):
            f[k + i] = (f[k + i] - c * gi) % p
        while f and f[-1] == 0:
            f.pop()
        if not f:
            break
    return quo


def _degree_pattern_mod_p(f, p):
    """Multiset of irreducible factor degrees of a squarefree f mod p,
    by distinct-degree factorization; None when f mod p degenerates."""
    fp = _mod_trim(f, p)
    d = len(fp) - 1
    if d != poly_degree(f):
        return None
    deriv = _mod_trim([i * c % p for i, c in enumerate(fp)][1:], p)
    if len(_mod_gcd(fp, deriv, p)) > 1:
        return None  # not squarefree mod p
    pattern = []
    rest = fp
    k = 0
    while len(rest) - 1 > 0:
        k += 1
        if 2 * k > len(rest) - 1:
            pattern.append(len(rest) - 1)
            break
        xp = _mod_pow_x(p ** k, rest, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        g = _mod_gcd(rest, _mod_trim(diff, p), p)
        if len(g) - 1 > 0:
            pattern.extend([k] * ((len(g) - 1) // k))
            inv = pow(g[-1], p - 2, p)
            g = [c * inv % p for c in g]
            rest = _mod_quo(rest, g, p)
    return sorted(pattern)


def _subset_sums(pattern):
    sums = {0}
    for v in pattern:
        sums |= {s + v for s in sums}
    return sums


def _is_prime(n):
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _simplest_rational_in(lo, hi):
    """The rational with smallest denominator in the closed interval,
    by walking the continued fraction of the endpoints."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -_simplest_rational_in(-hi, -lo)
    # now 0 < lo <= hi
    floor_lo = lo.numerator // lo.denominator
    if floor_lo + 1 <= hi:
        return Fraction(floor_lo + (0 if lo == floor_lo else 1))
    frac_lo = lo - floor_lo
    frac_hi = hi - floor_lo
    if frac_lo == 0:
        return Fraction(floor_lo)
    inner = _simplest_rational_in(1 / frac_hi, 1 / frac_lo)
    return floor_lo + 1 / inner


def _has_rational_root(f):
    """Complete rational root test on a primitive integer polynomial.

    Uses root isolation instead of divisor enumeration: every rational
    root has denominator dividing the leading coefficient, an interval
    narrower than 1/(2 lc^2) holds at most one such rational, and the
    simplest rational in the interval finds it when it exists.
    """
    if f[0] == 0:
        return True
    lc = abs(f[-1])
    roots = isolate_real_roots(f, digits=1)
    gap = Fraction(1, 2 * lc * lc)
    for root in roots:
        lo, hi = root.lo, root.hi
        flo = poly_eval(f, lo)
        while hi - lo >= gap:
            mid = (lo + hi) / 2
            fm = poly_eval(f, mid)
            if fm == 0:
                return True
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
        candidate = _simplest_rational_in(lo, hi)
        if candidate.denominator <= lc and poly_eval(f, candidate) == 0:
            return True
    return False


def is_irreducible(f):
    """Certified irreducibility of a nonconstant rational polynomial.

    Degree 1 is irreducible.  Otherwise the factorization degree
    patterns modulo the primes in IRREDUCIBILITY_PRIMES are collected:
    an irreducible reduction of full degree certifies True at once, and
    so does an empty cross-prime intersection of the possible rational
    factor degrees (subset sums of each pattern).  A rational root
    certifies False; its absence certifies True up to degree 3.  With
    no certificate either way, IrreducibilityUndetermined is raised:
    the caller must abort loudly rather than assume.
    """
    f = poly_primitive(f)
    d = poly_degree(f)
    if d <= 0:
        raise ValueError("is_irreducible requires a nonconstant polynomial")
    if d == 1:
        return True
    possible = set(range(1, d))
    for p in IRREDUCIBILITY_PRIMES:
        if f[-1] % p == 0:
            continue
        pattern = _degree_pattern_mod_p(f, p)
        if pattern is None:
            continue
        if pattern == [d]:
            return True
        possible &= _subset_sums(pattern)
        possible -= {0, d}
        if not possible:
            return True
    if _has_rational_root(f):
        return False
    if d <= 3:
        # quadratics and cubics factor only through a linear factor
        return True
    raise IrreducibilityUndetermined(
        f"no irreducibility certificate found for degree-{d} polynomial "
        f"{f} with primes up to {IRREDUCIBILITY_PRIMES[-1]}")


# ---------------------------------------------------------------------------
# Sturm sequences and real root isolation
# ---------------------------------------------------------------------------

def sturm_chain(f):
    chain = [[Fraction(c) for c in poly_trim(f)]]
    chain.append([Fraction(c) for c in poly_derivative(chain[0])])
    while poly_degree(chain[-1]) > 0:
        _, r = poly_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain, x):
    signs = []
    for f in chain:
        v = poly_eval(f, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(chain, lo, hi):
    """Number of distinct real roots in (lo, hi] for a squarefree input."""
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def _interval_eval(f, lo, hi):
    """Rational interval enclosure of f over [lo, hi] by Horner."""
    alo, ahi = Fraction(0), Fraction(0)
    for c in reversed(f):
        # multiply interval by [lo, hi]
        cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(cands) + c, max(cands) + c
    return alo, ahi


class RootInterval:
    """A certified isolating interval (lo, hi) for one simple real root."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)

    def midpoint(self):
        return (self.lo + self.hi) / 2

    def __repr__(self):
        return f"RootInterval({self.lo}, {self.hi})"


def isolate_real_roots(f, digits=10):
    """All real roots of f as isolating intervals of relative width
    below 10**-digits, sorted ascending.

    The input is made squarefree by dividing out gcd(f, f').  Sturm
    counts certify isolation; refinement is bisection to 1e-3 relative
    width and interval Newton afterwards.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    f = [Fraction(c) for c in poly_trim(f)]
    if poly_degree(f) < 1:
        return []
    g = poly_gcd(f, poly_derivative(f))
    if poly_degree(g) > 0:
        f, _ = poly_divmod(f, g)
    f = [Fraction(c) for c in poly_primitive(f)]

    roots = []
    shifted = f
    if f[0] == 0:
        # exact root at zero; isolate the rest of the polynomial
        roots.append(RootInterval(0, 0))
        k = next(i for i, c in enumerate(f) if c != 0)
        shifted = f[k:]
        if poly_degree(shifted) < 1:
            return roots

    chain = sturm_chain(shifted)
    lead = abs(shifted[-1])
    bound = Fraction(1) + max(abs(Fraction(c)) / lead for c in shifted[:-1]) \
        if len(shifted) > 1 else Fraction(1)

    stack = [(-bound, bound, sturm_count(chain, -bound, bound))]
    isolated = []
    while stack:
        lo, hi, count = stack.pop()
        if count == 0:
            continue
        if count == 1 and poly_eval(shifted, lo) != 0:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if poly_eval(shifted, mid) == 0:
            # nudge the split point off the root
            mid = (lo + 2 * hi) / 3
            if poly_eval(shifted, mid) == 0:
                mid = (2 * lo + hi) / 3
        cl = sturm_count(chain, lo, mid)
        stack.append((lo, mid, cl))
        stack.append((mid, hi, count - cl))

    deriv = poly_derivative(shifted)
    target = Fraction(1, 10 ** digits)
    for lo, hi in isolated:
        lo, hi = _refine(shifted, deriv, lo, hi, target)
        roots.append(RootInterval(lo, hi))
    roots.sort(key=lambda r: r.lo)
    return roots


def _refine(f, deriv, lo, hi, rel_target):
    flo = poly_eval(f, lo)
    fhi = poly_eval(f, hi)
    if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
        raise AssertionError("isolation interval lost its sign change")

    def done(lo, hi):
        m = min(abs(lo), abs(hi))
        return lo * hi > 0 and (hi - lo) < rel_target * m

    # bisection phase, to 1e-3 relative width
    coarse = Fraction(1, 1000)
    while not (lo * hi > 0 and (hi - lo) < coarse * min(abs(lo), abs(hi))):
        mid = (lo + hi) / 2
        fm = poly_eval(f, mid)
        if fm == 0:
            eps = (hi - lo) / 1024
            lo, hi = mid - eps, mid + eps
            flo, fhi = poly_eval(f, lo), poly_eval(f, hi)
            continue
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    # interval Newton phase
    while not done(lo, hi):
        dlo, dhi = _interval_eval(deriv, lo, hi)
        if dlo <= 0 <= dhi:
            mid = (lo + hi) / 2
            fm = poly_eval(f, mid)
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi, fhi = mid, fm
            continue
        mid = (lo + hi) / 2
        fm = poly_eval(f, mid)
        if fm == 0:
            eps = (hi - lo) / 1024
            lo, hi = mid - eps, mid + eps
            flo, fhi = poly_eval(f, lo), poly_eval(f, hi)
            continue
        cands = sorted((mid - fm / dlo, mid - fm / dhi))
        nlo, nhi = max(lo, cands[0]), min(hi, cands[1])
        if nlo >= nhi or (nhi - nlo) > (hi - lo) * Fraction(3, 4):
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi, fhi = mid, fm
            continue
        lo2, hi2 = nlo, nhi
        flo2, fhi2 = poly_eval(f, lo2), poly_eval(f, hi2)
        if flo2 == 0 or fhi2 == 0 or (flo2 > 0) == (fhi2 > 0):
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi, fhi = mid, fm
            continue
        lo, hi, flo, fhi = lo2, hi2, flo2, fhi2
    return lo, hi
