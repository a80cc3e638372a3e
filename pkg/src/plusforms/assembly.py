"""High-precision assembly of eigenform coefficient expansions.

An eigenform is an exact linear combination of the monomials
theta^a F^b.  Writing u = theta^4, v = F and a_min for the smallest
theta exponent of the weight (1 for even l, 3 for odd), every monomial
is theta^a_min u^j v^b, so one shared power chain per parity serves all
weights in a batch:

    w_j = theta^a_min u^j       (j = 0..B_max)
    v_b = F^b                   (b = 0..B_max)
    monomial_b = w_(B-b) * v_b  (one product per monomial)

All products are Kronecker-packed big-integer multiplications; the
signed combination into per-coordinate accumulators happens at the
packed level with integer scalars.  Memory stays bounded because the
pair products are consumed per weight and freed.
"""

from __future__ import annotations

from .generators import f_weight2_numpy, theta_coefficients
from .packed import Packed, SignedSeries


class AssemblyJob:
    """One weight's combination task inside a shared-parity batch."""

    __slots__ = ("key", "ell", "scalar_rows")

    def __init__(self, key, ell, scalar_rows):
        self.key = key
        self.ell = ell
        self.scalar_rows = scalar_rows   # rows[i][b]: int weight of monomial b


def _chain_parameters(ell):
    a_min = 1 if ell % 2 == 0 else 3
    b_max = (2 * ell + 1 - a_min) // 4
    return a_min, b_max


def assemble_batch(jobs, n):
    """Assemble the coordinate series of every job at precision n.

    All jobs must share the parity of ell (they share the theta power
    chain).  Returns {job.key: [SignedSeries per power-basis coord]}.
    """
    if not jobs:
        return {}
    parities = {job.ell % 2 for job in jobs}
    if len(parities) > 1:
        raise ValueError("assemble_batch jobs must share parity")
    a_min, _ = _chain_parameters(jobs[0].ell)
    b_need = max(_chain_parameters(job.ell)[1] for job in jobs)

    theta = Packed.from_ints(theta_coefficients(n), n)
    theta2 = theta.mul(theta, n)
    u = theta2.mul(theta2, n)
    w = [theta if a_min == 1 else theta.mul(theta2, n)]
    for _ in range(b_need):
        w.append(w[-1].mul(u, n))
    del theta2

    v = Packed.from_numpy(f_weight2_numpy(n), n)
    v_pow = [None, v]
    for _ in range(b_need - 1):
        v_pow.append(v_pow[-1].mul(v, n))

    out = {}
    for job in jobs:
        _, b_top = _chain_parameters(job.ell)
        pairs = []
        for b in range(b_top + 1):
            if b == 0:
                pairs.append(w[b_top])
            else:
                pairs.append(w[b_top - b].mul(v_pow[b], n))
        out[job.key] = [SignedSeries.accumulate(pairs, row, n)
                        for row in job.scalar_rows]
        del pairs
    return out


def assemble_coordinates(ell, scalar_rows, n):
    """Single-weight assembly; see assemble_batch."""
    job = AssemblyJob("only", ell, scalar_rows)
    return assemble_batch([job], n)["only"]
