"""Plus-space cusp forms of half-integral weight on Gamma0(4).

The ring of modular forms on Gamma0(4) is generated by theta (weight
1/2) and F (weight 2), so the monomials theta^a F^b with a + 4b = 2l+1
span the full weight l+1/2 space.  The plus subspace is cut out by
exact linear conditions a(n) = 0 for (-1)^l n = 2, 3 mod 4, the cusp
part by a(0) = 0, and the resulting dimension is checked against the
classical dimension of S_2l(SL2(Z)), which the plus space matches.
Hecke operators T(p^2) act on the reduced basis; their matrices feed
the eigenform extraction.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import CertificateError, PrecisionError
from .generators import f_weight2_series, theta_series
from .numberfield import AlgebraicNumber, eigen_decompose
from .packed import SignedSeries
from .series import ExactSeries, series_mul

_BASIS_CACHE = {}


def dim_cusp_level1(weight):
    """dim S_weight(SL2(Z)) for even weight >= 4 by the classical formula."""
    if weight % 2 or weight < 4:
        raise ValueError("weight must be even and >= 4")
    if weight % 12 == 2:
        dim_m = weight // 12
    else:
        dim_m = weight // 12 + 1
    return max(dim_m - 1, 0)


def monomial_exponents(ell):
    """(a, b) with theta^a F^b of weight ell + 1/2, b ascending."""
    out = []
    b = 0
    while 4 * b <= 2 * ell + 1:
        out.append((2 * ell + 1 - 4 * b, b))
        b += 1
    return out


def monomial_basis(ell, n):
    """The monomial series theta^a F^b truncated to n terms, b ascending."""
    if ell < 6:
        raise ValueError("ell must be >= 6")
    if n < 100:
        raise ValueError("precision must be >= 100")
    th = theta_series(n)
    f = f_weight2_series(n)
    th2 = series_mul(th, th, n)
    th4 = series_mul(th2, th2, n)
    exps = monomial_exponents(ell)
    a_min = exps[-1][0]
    mons = []
    # theta^a_min as a small power, then climb by theta^4 per step
    power = ExactSeries.one(n)
    for _ in range(a_min):
        power = series_mul(power, th, n)
    theta_powers = {exps[-1][0]: power}
    for a, _ in reversed(exps[:-1]):
        power = series_mul(power, th4, n)
        theta_powers[a] = power
    fpow = ExactSeries.one(n)
    f_powers = [fpow]
    for _ in range(len(exps) - 1):
        fpow = series_mul(fpow, f, n)
        f_powers.append(fpow)
    for a, b in exps:
        mons.append(series_mul(theta_powers[a], f_powers[b], n))
    return mons


class PlusBasis:
    """Reduced basis of the plus cusp space at one half-integral weight.

    rows are ExactSeries in reduced row-echelon form by leading index;
    combo[j][b] expresses row j as a rational combination of the
    monomials theta^a F^b.
    """

    def __init__(self, ell, precision, rows, leads, combo, exponents):
        self.ell = ell
        self.precision = precision
        self.rows = rows
        self.leads = leads
        self.combo = combo
        self.exponents = exponents

    @property
    def dimension(self):
        return len(self.rows)


def plus_cusp_basis(ell, n):
    """The plus cusp space basis at weight ell + 1/2, precision n.

    The constraint bound is B_c = 8 * (number of monomials) + 16; the
    dimension is checked against dim S_2l(SL2(Z)) and any mismatch is
    fatal.
    """
    key = (ell, n)
    cached = _BASIS_CACHE.get(key)
    if cached is not None:
        return cached
    mons = monomial_basis(ell, n)
    exps = monomial_exponents(ell)
    k = len(mons)
    bound = 8 * k + 16
    if n <= bound:
        raise PrecisionError(
            f"plus_cusp_basis needs precision > {bound}, got {n}")
    sign = 1 if ell % 2 == 0 else -1
    constraint_rows = [0] + [m for m in range(1, bound + 1)
                             if (sign * m) % 4 in (2, 3)]

    # nullspace of the constraint matrix over Q
    mat = [[Fraction(mons[i][m]) for i in range(k)] for m in constraint_rows]
    pivots = {}
    rank = 0
    nrows = len(mat)
    for col in range(k):
        pr = None
        for r in range(nrows):
            if r in pivots.values():
                continue
            if mat[r][col] != 0:
                pr = r
                break
        if pr is None:
            continue
        pv = mat[pr][col]
        mat[pr] = [x / pv for x in mat[pr]]
        for r in range(nrows):
            if r != pr and mat[r][col] != 0:
                f2 = mat[r][col]
                mat[r] = [x - f2 * y for x, y in zip(mat[r], mat[pr])]
        pivots[col] = pr
        rank += 1
    free_cols = [c for c in range(k) if c not in pivots]

    expected = dim_cusp_level1(2 * ell)
    if len(free_cols) != expected:
        raise CertificateError(
            f"plus cusp space at weight {2 * ell + 1}/2 has dimension "
            f"{len(free_cols)}, expected {expected}: constraint bound too "
            f"small or construction bug")

    combos = []
    for fc in free_cols:
        vec = [Fraction(0)] * k
        vec[fc] = Fraction(1)
        for col, r in pivots.items():
            vec[col] = -mat[r][fc]
        combos.append(vec)

    # materialize series and reduce to echelon form by leading index
    def combo_series(vec):
        coeffs = [Fraction(0)] * n
        for i, vi in enumerate(vec):
            if vi:
                ci = mons[i].coeffs
                for m in range(n):
                    if ci[m]:
                        coeffs[m] += vi * ci[m]
        return coeffs

    series = [combo_series(v) for v in combos]
    dim = len(series)
    placed = []
    for _ in range(dim):
        best = None
        for j in range(dim):
            if any(j == p[1] for p in placed):
                continue
            lead = next((m for m in range(n) if series[j][m] != 0), None)
            if lead is None:
                raise CertificateError(
                    "plus basis combination vanished identically")
            if best is None or lead < best[0]:
                best = (lead, j)
        lead, j = best
        pv = series[j][lead]
        series[j] = [x / pv for x in series[j]]
        combos[j] = [x / pv for x in combos[j]]
        for jj in range(dim):
            if jj != j and series[jj][lead] != 0:
                f2 = series[jj][lead]
                series[jj] = [x - f2 * y for x, y in
                              zip(series[jj], series[j])]
                combos[jj] = [x - f2 * y for x, y in
                              zip(combos[jj], combos[j])]
        placed.append((lead, j))
    placed.sort()
    rows = [ExactSeries(series[j], n) for _, j in placed]
    combo = [combos[j] for _, j in placed]
    leads = [lead for lead, _ in placed]
    basis = PlusBasis(ell, n, rows, leads, combo, exps)
    _BASIS_CACHE[key] = basis
    return basis


def _probe_precision(ell):
    return max(8 * len(monomial_exponents(ell)) + 18, 101)


def legendre_symbol(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def hecke_T_p2(f, p, ell, n_out):
    """T(p^2) acting on a weight ell + 1/2 plus form, p an odd prime.

    Output coefficient at n is
    a(p^2 n) + chi(n) p^(ell-1) a(n) + p^(2 ell - 1) a(n / p^2)
    with chi(n) the Legendre symbol ((-1)^ell n | p).
    """
    if p == 2:
        raise ValueError("p = 2 divides the level and is not supported")
    if f.precision < p * p * n_out:
        raise PrecisionError(
            f"hecke_T_p2 at {n_out} output terms requires input precision "
            f">= {p * p * n_out} (got {f.precision})")
    sign = 1 if ell % 2 == 0 else -1
    pl = p ** (ell - 1)
    p2l = p ** (2 * ell - 1)
    c = f.coeffs
    out = []
    for n in range(n_out):
        val = c[p * p * n]
        if n:
            chi = legendre_symbol(sign * n % p, p)
            if chi:
                val = val + chi * pl * c[n]
        if n % (p * p) == 0:
            val = val + p2l * c[n // (p * p)]
        out.append(val)
    return ExactSeries(out, n_out)


def hecke_matrix(ell, p):
    """Exact matrix of T(p^2) on the reduced plus cusp basis.

    Convention: column j holds the coordinates of T(p^2) applied to
    basis row j.  The action is verified against the full available
    precision; failure to close is fatal.
    """
    probe = plus_cusp_basis(ell, _probe_precision(ell))
    lead_max = max(probe.leads)
    need = max(probe.precision, p * p * (lead_max + 1))
    basis = probe if probe.precision >= need else plus_cusp_basis(ell, need)
    dim = basis.dimension
    n_check = basis.precision // (p * p)
    images = [hecke_T_p2(row, p, ell, n_check) for row in basis.rows]
    matrix = [[Fraction(0)] * dim for _ in range(dim)]
    for j, image in enumerate(images):
        coords = [Fraction(image[lead]) for lead in basis.leads]
        for i in range(dim):
            matrix[i][j] = coords[i]
        for m in range(n_check):
            acc = sum(coords[i] * basis.rows[i][m] for i in range(dim))
            if acc != image[m]:
                raise CertificateError(
                    f"T({p}^2) image of basis row {j} leaves the computed "
                    f"plus cusp space at q^{m}: basis dependent or "
                    f"precision too low")
    return matrix


class EigenData:
    """Eigen-split of one half-integral weight: everything cheap.

    Carries the Hecke field, the kernel vector in basis coordinates,
    the monomial coordinates, and the T(9), T(25) eigenvalues.  The
    expensive coefficient expansion lives separately (see assembly).
    """

    def __init__(self, ell):
        self.ell = ell
        self.two_k = 2 * ell + 1
        basis = plus_cusp_basis(ell, _probe_precision(ell))
        self.dimension = basis.dimension
        if self.dimension == 0:
            return
        m3 = hecke_matrix(ell, 3)
        self.charpoly, self.field, self.kernel = eigen_decompose(m3)
        coords = []
        for b in range(len(basis.exponents)):
            acc = self.field.zero()
            for j, vj in enumerate(self.kernel):
                cj = basis.combo[j][b]
                if cj:
                    acc = acc + vj * cj
            coords.append(acc)
        self.monomial_coords = tuple(coords)
        self.exponents = basis.exponents
        self.eigenvalues = {3: self.field.generator(),
                            5: self.hecke_eigenvalue(5)}

    def hecke_eigenvalue(self, p):
        """T(p^2) eigenvalue of the generic eigenform, exact in K."""
        mp = hecke_matrix(self.ell, p)
        pivot = next(i for i, vi in enumerate(self.kernel)
                     if not vi.is_zero())
        acc = self.field.zero()
        for j, vj in enumerate(self.kernel):
            c = mp[pivot][j]
            if c:
                acc = acc + vj * c
        lam = acc / self.kernel[pivot]
        image = [sum((mp[i][j] * self.kernel[j] for j in
                      range(self.dimension)), self.field.zero())
                 for i in range(self.dimension)]
        for i in range(self.dimension):
            if not (image[i] - lam * self.kernel[i]).is_zero():
                raise CertificateError(
                    f"kernel vector is not a T({p}^2) eigenvector")
        return lam

    def scalar_rows(self):
        """Integer monomial weights per power-basis coordinate.

        Returns (rows, denominator): rows[i][b] is an int and
        sum_b rows[i][b] * monomial_b is denominator times the i-th
        power-basis coordinate series of the eigenform.
        """
        d = self.field.degree
        denom = 1
        for c in self.monomial_coords:
            for x in c.coords:
                q = x.denominator
                denom = denom // gcd(denom, q) * q
        rows = []
        for i in range(d):
            rows.append([int(c.coords[i] * denom)
                         for c in self.monomial_coords])
        return rows, denom


class CoefficientStore:
    """Exact eigenform coefficients at full precision.

    One SignedSeries per power-basis coordinate of the Hecke field;
    coefficients come back as AlgebraicNumber values.
    """

    def __init__(self, field, coordinate_series, precision):
        self.field = field
        self.coordinate_series = coordinate_series
        self.precision = precision

    def raw_at(self, indices):
        indices = list(indices)
        for i in indices:
            if i >= self.precision:
                raise PrecisionError(
                    f"coefficient {i} beyond precision {self.precision}")
        per_coord = [s.coefficients_at(indices)
                     for s in self.coordinate_series]
        out = []
        for pos in range(len(indices)):
            out.append(self.field.element(
                [per_coord[i][pos] for i in range(len(per_coord))]))
        return out

    def raw_one(self, index):
        return self.raw_at([index])[0]


class HalfIntegralForm:
    """One plus-space Hecke eigenform with a chosen real embedding.

    Forms in the same Hecke orbit share the exact K-valued coefficient
    store and differ by the embedding.  Exact coefficients are
    normalized so that the first recorded coefficient equals 1.
    """

    def __init__(self, eigen, store, embedding, label, n0, a_n0,
                 eigen_checked_to, first_recorded_index):
        self.ell = eigen.ell
        self.two_k = eigen.two_k
        self.field = eigen.field
        self.monomial_coords = eigen.monomial_coords
        self.eigenvalues = eigen.eigenvalues
        self.store = store
        self.embedding = embedding
        self.label = label
        self.n0 = n0
        self.a_n0 = a_n0
        self._a_n0_inv = a_n0.inverse()
        self.eigen_checked_to = eigen_checked_to
        self.first_recorded_index = first_recorded_index

    @property
    def precision(self):
        return self.store.precision

    def raw_coefficients_at(self, indices):
        return self.store.raw_at(indices)

    def coefficient(self, n):
        """Exact coefficient, normalized so a(n0) = 1."""
        return self.store.raw_one(n) * self._a_n0_inv

    def coefficients(self, n_max):
        raw = self.store.raw_at(range(n_max))
        return [x * self._a_n0_inv for x in raw]

    def embedded_coefficient(self, n):
        return self.embedding.float_value(self.coefficient(n))

    def __repr__(self):
        return (f"HalfIntegralForm({self.label}, precision="
                f"{self.precision})")


def recorded_residue(ell):
    """The single residue class mod 4 of recorded squarefree indices."""
    return 1 if ell % 2 == 0 else 3


def banned_indices(ell, n_max):
    sign = 1 if ell % 2 == 0 else -1
    return [m for m in range(1, n_max) if (sign * m) % 4 in (2, 3)]


def check_plus_condition(store, ell, n_max):
    idx = banned_indices(ell, min(n_max, store.precision))
    for chunk_start in range(0, len(idx), 65536):
        chunk = idx[chunk_start:chunk_start + 65536]
        for i, value in zip(chunk, store.raw_at(chunk)):
            if not value.is_zero():
                raise CertificateError(
                    f"plus condition violated at q^{i}")


def check_eigen_equation(store, eigen, n_max, p=3):
    """Exact T(p^2) f = lambda f on coefficients up to n_max."""
    ell = eigen.ell
    lam = eigen.eigenvalues[p]
    n_max = min(n_max, store.precision // (p * p))
    sign = 1 if ell % 2 == 0 else -1
    pl = p ** (ell - 1)
    p2l = p ** (2 * ell - 1)
    ns = list(range(1, n_max))
    a_n = store.raw_at(ns)
    a_p2n = store.raw_at([p * p * n for n in ns])
    lookup = {n: v for n, v in zip(ns, a_n)}
    for n, an, ap2n in zip(ns, a_n, a_p2n):
        chi = legendre_symbol(sign * n % p, p)
        val = ap2n
        if chi:
            val = val + an * (chi * pl)
        if n % (p * p) == 0:
            val = val + lookup[n // (p * p)] * p2l
        if not (val - lam * an).is_zero():
            raise CertificateError(
                f"eigen-equation fails at q^{n} for T({p}^2)")
    return n_max


def extract_eigenforms(ell, n, digits=12, checks=True):
    """All plus-space Hecke eigenforms of weight ell + 1/2, exact to
    precision n, one per real embedding, labeled ascending by
    eigenvalue.
    """
    from .assembly import assemble_coordinates

    eigen = EigenData(ell)
    if eigen.dimension == 0:
        return []
    rows, _ = eigen.scalar_rows()
    coord_series = assemble_coordinates(ell, rows, n)
    store = CoefficientStore(eigen.field, coord_series, n)
    return finalize_forms(eigen, store, digits=digits, checks=checks)


def finalize_forms(eigen, store, digits=12, checks=True):
    """Wrap an eigen datum plus coefficient store into labeled forms."""
    n = store.precision
    n0 = recorded_residue(eigen.ell)
    a_n0 = store.raw_one(n0)
    if a_n0.is_zero():
        raise CertificateError(
            f"normalization index undefined: a({n0}) = 0 for weight "
            f"{eigen.two_k}/2")
    embeddings = eigen.field.real_embeddings(max(digits, 12))
    if len(embeddings) != eigen.field.degree:
        raise CertificateError(
            f"Hecke field of weight {eigen.two_k}/2 is not totally real: "
            f"{len(embeddings)} real roots for degree "
            f"{eigen.field.degree}")
    checked_to = 0
    if checks:
        check_plus_condition(store, eigen.ell, min(n, 10 ** 4))
        checked_to = check_eigen_equation(store, eigen, min(n // 9, 2048))
    forms = []
    for j, emb in enumerate(embeddings, start=1):
        label = f"{eigen.two_k}/2({j})"
        forms.append(HalfIntegralForm(eigen, store, emb, label, n0, a_n0,
                                      checked_to, n0))
    return forms
