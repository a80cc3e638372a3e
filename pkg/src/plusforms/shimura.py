"""Shimura lift certificates.

For a plus-space eigenform f of weight l + 1/2 and a squarefree
recorded index t, the series with coefficients

    A_t(n) = sum_{d | n} J((-1)^l t, d) d^(l-1) a(t (n/d)^2)

must equal a(t) times the level-1 eigenform of weight 2l with matching
Hecke eigenvalues, coefficient by coefficient and exactly.  Verifying
this to depth 500 for several t is the correctness certificate for the
whole expansion engine; every comparison here is exact.
"""

from __future__ import annotations

from .errors import CertificateError, PrecisionError
from .level1 import level1_generic
from .plusspace import recorded_residue


def kronecker_symbol(m, d):
    """Jacobi symbol extended multiplicatively to all d >= 1.

    The factor at 2 follows the second supplement: zero for even m,
    +1 for m = 1, 7 mod 8 and -1 for m = 3, 5 mod 8.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    result = 1
    while d % 2 == 0:
        d //= 2
        if m % 2 == 0:
            return 0
        if m % 8 in (3, 5):
            result = -result
    m %= d
    while m:
        while m % 2 == 0:
            m //= 2
            if d % 8 in (3, 5):
                result = -result
        m, d = d, m
        if m % 4 == 3 and d % 4 == 3:
            result = -result
        m %= d
    return result if d == 1 else 0


def is_squarefree(n):
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


class LiftReport:
    """Outcome of one Shimura lift verification."""

    def __init__(self, label, t, depth, max_abs_discrepancy,
                 matched_eigenvalues):
        self.label = label
        self.t = t
        self.depth = depth
        self.max_abs_discrepancy = max_abs_discrepancy
        self.matched_eigenvalues = matched_eigenvalues

    @property
    def ok(self):
        return self.max_abs_discrepancy == 0

    def __repr__(self):
        status = "ok" if self.ok else "FAILED"
        return (f"LiftReport({self.label}, t={self.t}, depth={self.depth}, "
                f"{status})")


def shimura_lift(form, t, depth):
    """A_t(1..depth) as exact field elements (unnormalized scale)."""
    if not is_squarefree(t):
        raise ValueError(f"lift parameter t = {t} is not squarefree")
    need = t * depth * depth + 1
    if form.precision < need:
        raise PrecisionError(
            f"shimura_lift to depth {depth} at t = {t} requires precision "
            f">= {need} (got {form.precision})")
    ell = form.ell
    sign_t = t if ell % 2 == 0 else -t
    squares = form.raw_coefficients_at([t * m * m
                                        for m in range(1, depth + 1)])
    a_at = {m: squares[m - 1] for m in range(1, depth + 1)}
    out = []
    for n in range(1, depth + 1):
        acc = form.field.zero()
        for d in range(1, n + 1):
            if n % d:
                continue
            j = kronecker_symbol(sign_t, d)
            if j:
                term = a_at[n // d] * (j * d ** (ell - 1))
                acc = acc + term
        out.append(acc)
    return out


def _abs_coordinate_sum(value):
    return sum(abs(c) for c in value.coords)


def verify_lift(form, t, depth, level1_form=None):
    """Certify shimura_lift(form, t) == a(t) * g to the given depth.

    g is the level-1 eigenform of weight 2l built over the same Hecke
    field (the characteristic polynomials must agree; mismatch raises).
    The discrepancy reported is the largest coordinate-wise absolute
    sum of the differences, an exact rational that must be zero.
    """
    ell = form.ell
    if level1_form is None:
        level1_form = level1_generic(2 * ell, depth + 1, field=form.field)
    if level1_form.field != form.field:
        raise CertificateError("wrong eigenform pairing: field mismatch")
    lam5_half = form.eigenvalues[5]
    lam5_lift = level1_form.eigenvalues[5]
    if not (lam5_half - lam5_lift).is_zero():
        raise CertificateError(
            "wrong eigenform pairing: T(25) eigenvalue of the half "
            "integral form differs from T_5 at level 1")
    if level1_form.precision < depth + 1:
        raise PrecisionError(
            f"level-1 form carries {level1_form.precision} terms, need "
            f"{depth + 1}")
    lift = shimura_lift(form, t, depth)
    a_t = form.raw_coefficients_at([t])[0]
    worst = 0
    for n in range(1, depth + 1):
        diff = lift[n - 1] - a_t * level1_form.coeffs[n]
        mag = _abs_coordinate_sum(diff)
        if mag > worst:
            worst = mag
    matched = [(3, form.eigenvalues[3]), (5, lam5_half)]
    return LiftReport(form.label, t, depth, worst, matched)


def default_lift_parameters(form, count=3):
    """The first `count` recorded squarefree t with a(t) != 0."""
    res = recorded_residue(form.ell)
    out = []
    t = res
    while len(out) < count:
        if is_squarefree(t) and t < form.precision:
            if not form.raw_coefficients_at([t])[0].is_zero():
                out.append(t)
        t += 4
        if t >= form.precision:
            break
    return out
