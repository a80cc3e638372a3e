from fractions import Fraction

from plusforms.assembly import AssemblyJob, assemble_batch
from plusforms.plusspace import EigenData, monomial_basis


def reference_coordinates(ell, scalar_rows, n):
    """Independent oracle: combine monomials with plain exact series."""
    mons = monomial_basis(ell, n)
    out = []
    for row in scalar_rows:
        acc = [0] * n
        for weight, mon in zip(row, mons):
            if weight:
                for m in range(n):
                    c = mon[m]
                    if c:
                        acc[m] += weight * c
        out.append(acc)
    return out


def test_assembly_matches_reference_rational_orbit():
    n = 400
    eigen = EigenData(6)
    rows, _ = eigen.scalar_rows()
    got = assemble_batch([AssemblyJob("x", 6, rows)], n)["x"]
    expected = reference_coordinates(6, rows, n)
    assert [s.to_int_list() for s in got] == expected


def test_assembly_matches_reference_quadratic_orbit():
    n = 250
    eigen = EigenData(12)
    rows, _ = eigen.scalar_rows()
    got = assemble_batch([AssemblyJob("x", 12, rows)], n)["x"]
    expected = reference_coordinates(12, rows, n)
    assert [s.to_int_list() for s in got] == expected


def test_assembly_odd_parity():
    n = 300
    eigen = EigenData(9)
    rows, _ = eigen.scalar_rows()
    got = assemble_batch([AssemblyJob("x", 9, rows)], n)["x"]
    expected = reference_coordinates(9, rows, n)
    assert [s.to_int_list() for s in got] == expected


def test_batch_shares_chains_across_weights():
    n = 260
    jobs = []
    eigens = {}
    for ell in (6, 8, 12):
        eigen = EigenData(ell)
        eigens[ell] = eigen
        rows, _ = eigen.scalar_rows()
        jobs.append(AssemblyJob(ell, ell, rows))
    packs = assemble_batch(jobs, n)
    for ell, eigen in eigens.items():
        rows, _ = eigen.scalar_rows()
        expected = reference_coordinates(ell, rows, n)
        assert [s.to_int_list() for s in packs[ell]] == expected


def test_mixed_parity_rejected():
    import pytest
    eigen6 = EigenData(6)
    eigen9 = EigenData(9)
    jobs = [AssemblyJob(6, 6, eigen6.scalar_rows()[0]),
            AssemblyJob(9, 9, eigen9.scalar_rows()[0])]
    with pytest.raises(ValueError, match="parity"):
        assemble_batch(jobs, 200)
