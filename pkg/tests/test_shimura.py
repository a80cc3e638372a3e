import pytest

from plusforms.errors import CertificateError, PrecisionError
from plusforms.generators import tau
from plusforms.level1 import level1_generic
from plusforms.plusspace import extract_eigenforms
from plusforms.shimura import (default_lift_parameters, kronecker_symbol,
                               shimura_lift, verify_lift)


def jacobi_bruteforce(m, d):
    """Multiplicative extension from prime values, as an oracle."""
    if d == 1:
        return 1
    result = 1
    for p in range(2, d + 1):
        while d % p == 0:
            d //= p
            if p == 2:
                if m % 2 == 0:
                    return 0
                result *= 1 if m % 8 in (1, 7) else -1
            else:
                r = pow(m % p, (p - 1) // 2, p)
                if r == 0:
                    return 0
                result *= 1 if r == 1 else -1
    return result


def test_kronecker_against_bruteforce():
    for m in range(-30, 31):
        for d in range(1, 40):
            assert kronecker_symbol(m, d) == jacobi_bruteforce(m, d), (m, d)


def test_lift_single_divisor():
    forms = extract_eigenforms(6, 1000)
    f = forms[0]
    lift = shimura_lift(f, 1, 4)
    assert lift[0] == f.raw_coefficients_at([1])[0]


def test_lift_formula_instantiation():
    # A(2) = a(4) + 2^5 a(1) for t = 1, ell = 6
    forms = extract_eigenforms(6, 1000)
    f = forms[0]
    lift = shimura_lift(f, 1, 2)
    a1, a4 = f.raw_coefficients_at([1, 4])
    assert lift[1] == a4 + a1 * 32
    # tau(2) = -24 forces a(4) = -56 a(1)
    assert a4 == a1 * (-56)


def test_lift_of_weight_13_2_is_delta():
    forms = extract_eigenforms(6, 26 * 26 + 1)
    f = forms[0]
    lift = shimura_lift(f, 1, 26)
    t = tau(26)
    a1 = f.raw_coefficients_at([1])[0]
    for n in range(1, 27):
        assert lift[n - 1] == a1 * t[n - 1]


def test_verify_lift_certificate():
    forms = extract_eigenforms(6, 5 * 40 * 40 + 1)
    f = forms[0]
    report = verify_lift(f, 1, 40)
    assert report.ok
    assert report.max_abs_discrepancy == 0
    assert report.matched_eigenvalues[0][1].as_rational() == 252
    assert report.matched_eigenvalues[1][1].as_rational() == 4830
    report5 = verify_lift(f, 5, 40)
    assert report5.ok


def test_verify_lift_negative_control():
    # a non-eigenform plus-space element must produce a discrepancy
    from plusforms.plusspace import (CoefficientStore, plus_cusp_basis,
                                     finalize_forms, EigenData)
    depth = 20
    n = 5 * depth * depth + 1
    eigen = EigenData(12)
    rows, _ = eigen.scalar_rows()
    # corrupt the second coordinate rows to break the eigen property
    rows_bad = [list(r) for r in rows]
    rows_bad[0][0] += 1
    from plusforms.assembly import assemble_coordinates
    store = CoefficientStore(eigen.field,
                             assemble_coordinates(12, rows_bad, n), n)
    forms = finalize_forms(eigen, store, checks=False)
    f = forms[0]
    report = verify_lift(f, 1, depth)
    assert not report.ok
    assert report.max_abs_discrepancy > 0


def test_lift_requires_precision():
    forms = extract_eigenforms(6, 500)
    with pytest.raises(PrecisionError):
        shimura_lift(forms[0], 1, 500)


def test_lift_rejects_nonsquarefree_t():
    forms = extract_eigenforms(6, 500)
    with pytest.raises(ValueError):
        shimura_lift(forms[0], 4, 5)


def test_default_lift_parameters():
    forms = extract_eigenforms(6, 500)
    assert default_lift_parameters(forms[0]) == [1, 5, 13]


def test_odd_parity_lift():
    # weight 19/2 (ell = 9) lifts to weight 18 with t = 3
    depth = 15
    forms = extract_eigenforms(9, 3 * depth * depth + 1)
    assert len(forms) == 1
    report = verify_lift(forms[0], 3, depth)
    assert report.ok


def test_eigenvalue_ratio_independent_of_t():
    depth = 12
    forms = extract_eigenforms(6, 13 * depth * depth + 1)
    f = forms[0]
    g = level1_generic(12, depth + 1, field=f.field)
    for t in (1, 5, 13):
        lift = shimura_lift(f, t, depth)
        a_t = f.raw_coefficients_at([t])[0]
        if a_t.is_zero():
            continue
        for p in (2, 3, 5, 7, 11):
            # A_t(p)/A_t(1) equals the level-1 eigenvalue c(p)
            assert lift[p - 1] == a_t * g.coeffs[p]
