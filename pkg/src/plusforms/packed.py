"""Packed big-integer series for multi-million term exact expansions.

A Packed value stores a series with non-negative integer coefficients
as a single gmpy2 integer, whose two's little-endian byte string is an
(n, width/8) matrix of fixed-width slots.  Multiplication of two Packed
series is then one big-integer multiplication (Kronecker substitution),
which gmpy2/GMP performs in quasi-linear time.  Slot widths are chosen
per product from certified per-operand coefficient bounds, so carries
can never cross slot boundaries and every result is exact.

Signed series (eigenform coordinates) are kept as a pair of Packed
accumulators, one for the positively and one for the negatively
weighted contributions; true coefficients are differences of slots.
"""

from __future__ import annotations

import numpy as np
import gmpy2


def _ceil8(bits):
    return (bits + 7) // 8 * 8


def _mpz_to_bytes(value, nbytes):
    return int(value).to_bytes(nbytes, "little")


class Packed:
    """Non-negative integer series in a fixed-width packed integer."""

    __slots__ = ("n", "width", "value", "max_bits")

    def __init__(self, n, width, value, max_bits):
        self.n = n
        self.width = width          # bits per slot, multiple of 8
        self.value = value          # gmpy2.mpz >= 0
        self.max_bits = max_bits    # certified bound: every slot < 2**max_bits

    # -- constructors -------------------------------------------------

    @classmethod
    def from_ints(cls, coeffs, n=None):
        coeffs = list(coeffs)
        if n is None:
            n = len(coeffs)
        coeffs = coeffs[:n] + [0] * (n - len(coeffs))
        if any(c < 0 for c in coeffs):
            raise ValueError("Packed series must be non-negative")
        mx = max(coeffs, default=0)
        bits = max(mx.bit_length(), 1)
        width = _ceil8(bits)
        nbytes = width // 8
        buf = bytearray(n * nbytes)
        for i, c in enumerate(coeffs):
            if c:
                buf[i * nbytes:(i + 1) * nbytes] = c.to_bytes(nbytes,
                                                              "little")
        return cls(n, width, gmpy2.mpz(int.from_bytes(buf, "little")), bits)

    @classmethod
    def from_numpy(cls, arr, n=None):
        """From a non-negative integer numpy array (fits in uint64)."""
        if n is None:
            n = len(arr)
        a = np.zeros(n, dtype="<u8")
        a[:len(arr)] = arr[:n]
        mx = int(a.max()) if n else 0
        bits = max(mx.bit_length(), 1)
        width = _ceil8(bits)
        mat = a.view("u1").reshape(n, 8)[:, :width // 8]
        value = gmpy2.mpz(int.from_bytes(np.ascontiguousarray(mat).tobytes(),
                                         "little"))
        return cls(n, width, value, bits)

    # -- representation changes ---------------------------------------

    def byte_matrix(self):
        nbytes = self.width // 8
        blob = _mpz_to_bytes(self.value, self.n * nbytes)
        return np.frombuffer(blob, dtype="u1").reshape(self.n, nbytes)

    def stretched(self, width):
        """The same series packed at a wider slot width."""
        if width == self.width:
            return self
        if width < self.width:
            if self.max_bits > width:
                raise ValueError("cannot narrow below coefficient size")
        old = self.byte_matrix()
        out = np.zeros((self.n, width // 8), dtype="u1")
        take = min(old.shape[1], width // 8)
        out[:, :take] = old[:, :take]
        value = gmpy2.mpz(int.from_bytes(out.tobytes(), "little"))
        return Packed(self.n, width, value, self.max_bits)

    def scan_max_bits(self):
        """Tighten max_bits by scanning actual slot contents."""
        mat = self.byte_matrix()
        nz = mat != 0
        any_nz = nz.any(axis=1)
        if not any_nz.any():
            self.max_bits = 1
            return self.max_bits
        # highest nonzero byte index per slot
        top = mat.shape[1] - 1 - np.argmax(nz[:, ::-1], axis=1)
        top[~any_nz] = -1
        hi = int(top.max())
        lead = int(mat[top == hi, hi].max())
        self.max_bits = 8 * hi + lead.bit_length()
        return self.max_bits

    # -- arithmetic ----------------------------------------------------

    def mul(self, other, n_out, scan=True):
        """Exact truncated product, one big-integer multiplication."""
        terms = min(self.n, other.n, n_out)
        width = _ceil8(self.max_bits + other.max_bits
                       + max(terms - 1, 1).bit_length())
        a = self.stretched(width)
        b = other.stretched(width)
        value = a.value * b.value
        value &= (gmpy2.mpz(1) << (n_out * width)) - 1
        out = Packed(n_out, width,
                     value, self.max_bits + other.max_bits
                     + max(terms - 1, 1).bit_length())
        if scan:
            out.scan_max_bits()
        return out

    # -- extraction ----------------------------------------------------

    def coefficients_at(self, indices):
        nbytes = self.width // 8
        blob = _mpz_to_bytes(self.value, self.n * nbytes)
        return [int.from_bytes(blob[i * nbytes:(i + 1) * nbytes], "little")
                for i in indices]

    def to_int_list(self):
        return self.coefficients_at(range(self.n))


class SignedSeries:
    """A series with signed coefficients as a positive/negative pair.

    Treated as immutable once accumulated; the byte expansions used by
    coefficient extraction are cached on first use.
    """

    __slots__ = ("n", "width", "pos", "neg", "_blobs")

    def __init__(self, n, width):
        self.n = n
        self.width = width
        self.pos = gmpy2.mpz(0)
        self.neg = gmpy2.mpz(0)
        self._blobs = None

    @classmethod
    def accumulate(cls, packed_list, scalars, n):
        """sum_i scalars[i] * packed_list[i] with signed int scalars.

        The accumulator width is sized from certified bounds so slots
        never overflow.
        """
        if len(packed_list) != len(scalars):
            raise ValueError("length mismatch")
        bound = 0
        for p, s in zip(packed_list, scalars):
            bound += abs(s) << p.max_bits
        width = _ceil8(max(bound.bit_length() + 1, 8))
        acc = cls(n, width)
        for p, s in zip(packed_list, scalars):
            if s == 0:
                continue
            v = p.stretched(width).value
            if p.n > n:
                v &= (gmpy2.mpz(1) << (n * width)) - 1
            if s > 0:
                acc.pos += s * v
            else:
                acc.neg += (-s) * v
        return acc

    def coefficients_at(self, indices):
        nbytes = self.width // 8
        if self._blobs is None:
            total = self.n * nbytes
            self._blobs = (_mpz_to_bytes(self.pos, total),
                           _mpz_to_bytes(self.neg, total))
        pb, nb = self._blobs
        out = []
        for i in indices:
            lo, hi = i * nbytes, (i + 1) * nbytes
            out.append(int.from_bytes(pb[lo:hi], "little")
                       - int.from_bytes(nb[lo:hi], "little"))
        return out

    def coefficient(self, i):
        return self.coefficients_at([i])[0]

    def to_int_list(self):
        return self.coefficients_at(range(self.n))
