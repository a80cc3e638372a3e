"""Level-one cusp forms and their Hecke eigenforms.

The cusp space S_w(SL2(Z)) is Delta times the weight w - 12 span of
E4^alpha E6^beta monomials.  Hecke operators act by the classical
T_p formula c(pn) + p^(w-1) c(n/p); the eigen-split mirrors the plus
space machinery and serves as an independent oracle through the
Shimura correspondence.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import CertificateError, PrecisionError
from .generators import delta_series, eisenstein4, eisenstein6
from .numberfield import AlgebraicNumber, eigen_decompose, kernel_vector
from .plusspace import dim_cusp_level1
from .series import ExactSeries, series_mul

_BASIS_CACHE = {}


def cusp_basis_level1(weight, n):
    """Echelonized basis of S_weight(SL2(Z)) to precision n.

    Returns (rows, leads) with rows in reduced row-echelon form by
    leading index; leading indices are 1..dim for these weights.
    """
    key = (weight, n)
    cached = _BASIS_CACHE.get(key)
    if cached is not None:
        return cached
    dim = dim_cusp_level1(weight)
    if dim == 0:
        return [], []
    delta = delta_series(n)
    e4 = eisenstein4(n)
    e6 = eisenstein6(n)
    raw = []
    rest = weight - 12
    for beta in range(rest // 6 + 1):
        r = rest - 6 * beta
        if r % 4:
            continue
        alpha = r // 4
        series = delta
        for _ in range(alpha):
            series = series_mul(series, e4, n)
        for _ in range(beta):
            series = series_mul(series, e6, n)
        raw.append([Fraction(c) for c in series.coeffs])
    if len(raw) < dim:
        raise CertificateError(
            f"level-1 monomial count {len(raw)} below dimension {dim}")

    placed = []
    for _ in range(len(raw)):
        best = None
        for j in range(len(raw)):
            if any(j == p[1] for p in placed):
                continue
            lead = next((m for m in range(n) if raw[j][m] != 0), None)
            if lead is None:
                continue
            if best is None or lead < best[0]:
                best = (lead, j)
        if best is None:
            break
        lead, j = best
        pv = raw[j][lead]
        raw[j] = [x / pv for x in raw[j]]
        for jj in range(len(raw)):
            if jj != j and raw[jj][lead] != 0:
                f2 = raw[jj][lead]
                raw[jj] = [x - f2 * y for x, y in zip(raw[jj], raw[j])]
        placed.append((lead, j))
    placed = [p for p in placed
              if any(c != 0 for c in raw[p[1]])]
    if len(placed) != dim:
        raise CertificateError(
            f"level-1 basis at weight {weight} has rank {len(placed)}, "
            f"expected {dim}")
    placed.sort()
    rows = [ExactSeries(raw[j], n) for _, j in placed]
    leads = [lead for lead, _ in placed]
    _BASIS_CACHE[key] = (rows, leads)
    return rows, leads


def hecke_T_p(f, p, weight, n_out):
    """Classical T_p on integral weight level-1 forms."""
    if f.precision < p * n_out:
        raise PrecisionError(
            f"hecke_T_p at {n_out} terms requires precision >= {p * n_out} "
            f"(got {f.precision})")
    pw = p ** (weight - 1)
    c = f.coeffs
    out = []
    for n in range(n_out):
        val = c[p * n]
        if n % p == 0:
            val = val + pw * c[n // p]
        out.append(val)
    return ExactSeries(out, n_out)


def hecke_matrix_level1(weight, p, n=None):
    """Matrix of T_p on the echelonized basis of S_weight(SL2(Z))."""
    dim = dim_cusp_level1(weight)
    if dim == 0:
        return []
    probe_n = max(32, 4 * dim + 8)
    rows, leads = cusp_basis_level1(weight, probe_n)
    need = max(probe_n, p * (max(leads) + 1))
    if n is not None:
        need = max(need, n)
    rows, leads = cusp_basis_level1(weight, need)
    n_check = need // p
    matrix = [[Fraction(0)] * dim for _ in range(dim)]
    for j, row in enumerate(rows):
        image = hecke_T_p(row, p, weight, n_check)
        coords = [Fraction(image[lead]) for lead in leads]
        for i in range(dim):
            matrix[i][j] = coords[i]
        for m in range(n_check):
            acc = sum(coords[i] * rows[i][m] for i in range(dim))
            if acc != image[m]:
                raise CertificateError(
                    f"T_{p} image leaves S_{weight}(SL2(Z)) at q^{m}")
    return matrix


class Level1Eigenform:
    """A level-1 Hecke eigenform with exact K-valued coefficients,
    normalized so the coefficient of q is one."""

    def __init__(self, weight, field, coeffs, embedding=None, label=None):
        self.weight = weight
        self.field = field
        self.coeffs = coeffs
        self.embedding = embedding
        self.label = label

    @property
    def precision(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"Level1Eigenform(weight={self.weight}, label={self.label})"


def level1_generic(weight, n, field=None):
    """The generic level-1 eigenform over its Hecke field.

    Coefficients are AlgebraicNumber values with c(1) = 1 and the T_3
    eigenvalue equal to the field generator.  When a field is supplied
    its minimal polynomial must match the characteristic polynomial of
    T_3 (certificate failure otherwise), and the form is built over
    that field object.
    """
    from .polynomials import charpoly

    dim = dim_cusp_level1(weight)
    if dim == 0:
        return None
    m3 = hecke_matrix_level1(weight, 3)
    if field is not None:
        g = charpoly(m3)
        if tuple(Fraction(c) for c in g) != field.min_poly:
            raise CertificateError(
                "wrong eigenform pairing: T_3 characteristic polynomial "
                f"at level 1 weight {weight} does not match the supplied "
                "Hecke field")
        x = field.generator()
        shifted = [[field.from_rational(m3[i][j]) - (x if i == j else 0)
                    for j in range(dim)] for i in range(dim)]
        v = kernel_vector(shifted, field)
    else:
        _, field, v = eigen_decompose(m3)
    rows, leads = cusp_basis_level1(weight, n)
    # normalize c(1) = 1: the lead-1 coordinate is v[leads.index(1)]
    lead_one = leads.index(1)
    scale = v[lead_one].inverse()
    v = [x * scale for x in v]
    coeffs = []
    for m in range(n):
        acc = field.zero()
        for j, vj in enumerate(v):
            cm = rows[j][m]
            if cm:
                acc = acc + vj * cm
        coeffs.append(acc)
    lam5 = _eigenvalue_of(hecke_matrix_level1(weight, 5), v, field)
    form = Level1Eigenform(weight, field, coeffs)
    form.eigenvalues = {3: field.generator(), 5: lam5}
    return form


def _eigenvalue_of(matrix, v, field):
    pivot = next(i for i, vi in enumerate(v) if not vi.is_zero())
    acc = field.zero()
    for j, vj in enumerate(v):
        c = matrix[pivot][j]
        if c:
            acc = acc + vj * c
    return acc / v[pivot]


def level1_eigenform(weight, n, digits=12):
    """All Hecke eigenforms of S_weight(SL2(Z)), one per real embedding
    of the Hecke field, ascending by T_3 eigenvalue."""
    generic = level1_generic(weight, n)
    if generic is None:
        return []
    field = generic.field
    embeddings = field.real_embeddings(max(digits, 12))
    if len(embeddings) != field.degree:
        raise CertificateError(
            f"level-1 Hecke field at weight {weight} is not totally real")
    forms = []
    for j, emb in enumerate(embeddings, start=1):
        forms.append(Level1Eigenform(weight, field, generic.coeffs,
                                     emb, f"{weight}({j})"))
        forms[-1].eigenvalues = generic.eigenvalues
    return forms
