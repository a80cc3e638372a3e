"""Exact plus-space Hecke eigenforms on Gamma0(4) and the statistics
of their normalized Fourier coefficients."""

from .errors import (CertificateError, ConfigError,
                     IrreducibilityUndetermined, PrecisionError)
from .series import ExactSeries, series_mul, series_pow
from .polynomials import charpoly, is_irreducible, isolate_real_roots
from .numberfield import (AlgebraicNumber, NumberField, RealEmbedding,
                          kernel_vector)
from .plusspace import (HalfIntegralForm, extract_eigenforms, hecke_matrix,
                        hecke_T_p2, monomial_basis, plus_cusp_basis)
from .level1 import Level1Eigenform, level1_eigenform
from .shimura import LiftReport, shimura_lift, verify_lift

__version__ = "0.1.0"

__all__ = [
    "AlgebraicNumber", "CertificateError", "ConfigError", "ExactSeries",
    "HalfIntegralForm", "IrreducibilityUndetermined", "Level1Eigenform",
    "LiftReport", "NumberField", "PrecisionError", "RealEmbedding",
    "charpoly", "extract_eigenforms", "hecke_T_p2", "hecke_matrix",
    "is_irreducible", "isolate_real_roots", "kernel_vector",
    "level1_eigenform", "monomial_basis", "plus_cusp_basis", "series_mul",
    "series_pow", "shimura_lift", "verify_lift",
]
