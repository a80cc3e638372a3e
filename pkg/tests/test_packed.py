import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plusforms.packed import Packed, SignedSeries
from plusforms.series import _schoolbook


def test_roundtrip_ints():
    coeffs = [0, 1, 2**40, 5, 0, 123456789]
    p = Packed.from_ints(coeffs)
    assert p.to_int_list() == coeffs


def test_roundtrip_numpy():
    arr = np.array([3, 0, 7, 2**50], dtype=np.uint64)
    p = Packed.from_numpy(arr)
    assert p.to_int_list() == [3, 0, 7, 2**50]


def test_rejects_negative():
    with pytest.raises(ValueError):
        Packed.from_ints([1, -2])


def test_stretch_preserves_values():
    p = Packed.from_ints([1, 255, 256, 65535])
    q = p.stretched(64)
    assert q.to_int_list() == p.to_int_list()
    assert q.width == 64


def test_scan_max_bits():
    p = Packed.from_ints([0, 1, 2**33 - 1, 7], 4)
    p = p.stretched(64)
    p.max_bits = 64
    assert p.scan_max_bits() == 33


@given(st.lists(st.integers(0, 2**60), min_size=1, max_size=60),
       st.lists(st.integers(0, 2**60), min_size=1, max_size=60))
@settings(max_examples=50, deadline=None)
def test_mul_matches_schoolbook(xs, ys):
    n = max(len(xs), len(ys))
    oracle = _schoolbook(xs, ys, n)
    got = Packed.from_ints(xs, n).mul(Packed.from_ints(ys, n), n)
    assert got.to_int_list() == oracle


def test_mul_truncates():
    a = Packed.from_ints([1] * 10)
    out = a.mul(a, 4)
    assert out.n == 4
    assert out.to_int_list() == [1, 2, 3, 4]


def test_signed_accumulate():
    rng = random.Random(3)
    n = 50
    packs = [Packed.from_ints([rng.randint(0, 10**9) for _ in range(n)])
             for _ in range(4)]
    scalars = [3, -71234567890123, 0, 5]
    acc = SignedSeries.accumulate(packs, scalars, n)
    values = acc.to_int_list()
    for i in range(n):
        expected = sum(s * p.to_int_list()[i]
                       for s, p in zip(scalars, packs))
        assert values[i] == expected


def test_coefficients_at():
    coeffs = [i * i * 7 for i in range(100)]
    p = Packed.from_ints(coeffs)
    idx = [0, 3, 99, 50]
    assert p.coefficients_at(idx) == [coeffs[i] for i in idx]
