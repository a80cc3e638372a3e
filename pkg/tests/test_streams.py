import numpy as np
import pytest

from plusforms.plusspace import extract_eigenforms
from plusforms.streams import (CoeffStream, format_value, normalize,
                               prime_filter, read_stream, recorded_indices,
                               squarefree_sieve, subset_split, write_stream)


def brute_squarefree(n):
    for d in range(2, int(n ** 0.5) + 1):
        if n % (d * d) == 0:
            return False
    return True


def test_sieve_small():
    mask = squarefree_sieve(10)
    got = {n for n in range(1, 11) if mask[n]}
    assert got == {1, 2, 3, 5, 6, 7, 10}


def test_sieve_counts():
    assert int(squarefree_sieve(30)[1:].sum()) == 19
    assert int(squarefree_sieve(100)[1:].sum()) == 61


def test_sieve_matches_bruteforce():
    mask = squarefree_sieve(2000)
    for n in range(1, 2001):
        assert mask[n] == brute_squarefree(n), n


def test_recorded_indices_even_ell():
    assert list(recorded_indices(6, 30)) == [1, 5, 13, 17, 21, 29]


def test_recorded_indices_odd_ell():
    assert list(recorded_indices(7, 20)) == [3, 7, 11, 15, 19]


def test_recorded_indices_trivial():
    assert list(recorded_indices(6, 1)) == [1]


def test_recorded_indices_bruteforce():
    for ell in (6, 9):
        got = list(recorded_indices(ell, 10 ** 4))
        residue = 1 if ell % 2 == 0 else 3
        expected = [n for n in range(1, 10 ** 4 + 1)
                    if brute_squarefree(n) and n % 4 == residue]
        assert got == expected


@pytest.fixture(scope="module")
def form_13_2():
    return extract_eigenforms(6, 2001)[0]


def test_normalize_first_entry_one(form_13_2):
    stream = normalize(form_13_2, 2000)
    assert stream.values[0] == 1.0
    assert stream.indices[0] == 1


def test_normalize_values_match_floats(form_13_2):
    stream = normalize(form_13_2, 2000)
    e = (form_13_2.two_k - 2) / 4
    for pos in range(0, 40):
        n = int(stream.indices[pos])
        a = form_13_2.coefficient(n).as_rational()
        expected = (a.numerator / a.denominator) / n ** e
        assert stream.values[pos] == pytest.approx(expected, rel=1e-9)


def test_normalize_scaling_invariance(form_13_2):
    # the stream is a ratio, so any rescaling of the exact form drops out
    stream = normalize(form_13_2, 1500)
    e = (form_13_2.two_k - 2) / 4
    raw = form_13_2.raw_coefficients_at([int(i) for i in stream.indices])
    a0 = raw[0].as_rational()
    for pos in range(1, 30):
        n = int(stream.indices[pos])
        scaled = raw[pos].as_rational() * 7  # pretend the form was scaled
        expected = float(scaled / (7 * a0)) / n ** e
        assert stream.values[pos] == pytest.approx(expected, rel=1e-9)


def test_normalize_exponent_example():
    # weight 13/2 has exponent 11/4
    assert (13 - 2) / 4 == 2.75


def test_stream_roundtrip(tmp_path, form_13_2):
    stream = normalize(form_13_2, 2000)
    path = tmp_path / "s.coeffs"
    write_stream(stream, path)
    back = read_stream(path)
    assert back == stream
    # decimal representations are bit-identical
    write_stream(back, tmp_path / "s2.coeffs")
    assert (tmp_path / "s.coeffs").read_bytes() == \
        (tmp_path / "s2.coeffs").read_bytes()


def test_empty_stream_roundtrip(tmp_path):
    stream = CoeffStream("13/2(1)", 13, 6, 10, [], [])
    path = tmp_path / "empty.coeffs"
    write_stream(stream, path)
    back = read_stream(path)
    assert len(back) == 0
    assert back.label == "13/2(1)"


def test_three_entry_roundtrip(tmp_path):
    stream = CoeffStream("x", 13, 6, 21, [1, 5, 21],
                         [1.0, -0.25881838583, 3.3e-5])
    path = tmp_path / "three.coeffs"
    write_stream(stream, path)
    text = path.read_text().splitlines()
    assert len(text) == 5 + 3
    assert text[5].split("\t")[1] == "1.000000000e+00"
    back = read_stream(path)
    assert back == stream


def test_malformed_line_reports_number(tmp_path):
    path = tmp_path / "bad.coeffs"
    path.write_text("# label=x\n# two_k=13\n# ell=6\n# bound=5\n"
                    "# count=1\n1 1.0\n")
    with pytest.raises(ValueError, match=":6"):
        read_stream(path)


def test_count_mismatch(tmp_path):
    path = tmp_path / "bad2.coeffs"
    path.write_text("# label=x\n# two_k=13\n# ell=6\n# bound=5\n"
                    "# count=2\n1\t1.000000000e+00\n")
    with pytest.raises(ValueError, match="count"):
        read_stream(path)


def test_subset_split_sizes():
    s = CoeffStream("x", 13, 6, 100, list(range(1, 41, 4)),
                    [0.1] * 10)
    sizes = [len(p) for p in subset_split(s, 2)]
    assert sizes == [5, 5]
    sizes = [len(p) for p in subset_split(s, 3)]
    assert sizes == [4, 3, 3]
    pieces = subset_split(s, 3)
    joined = np.concatenate([p.indices for p in pieces])
    assert np.array_equal(joined, s.indices)


def test_prime_filter():
    s = CoeffStream("x", 13, 6, 21, [1, 5, 13, 21], [1.0, 2.0, 3.0, 4.0])
    out = prime_filter(s)
    assert list(out.indices) == [5, 13]
    assert list(out.values) == [2.0, 3.0]


def test_prime_filter_empty():
    s = CoeffStream("x", 13, 6, 10, [], [])
    assert len(prime_filter(s)) == 0


def test_prime_filter_residue_class():
    idx = recorded_indices(6, 100)
    s = CoeffStream("x", 13, 6, 100, idx, np.ones(len(idx)))
    out = prime_filter(s)
    assert list(out.indices) == [5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97]


def test_format_value_stability():
    rng = np.random.default_rng(11)
    for v in rng.normal(size=200) * 10.0 ** rng.integers(-8, 8, 200):
        s = format_value(v)
        assert format_value(float(s)) == s
