"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit 2,
mathematical certificate failures exit 3, fit non-convergence exit 4.
"""


class PrecisionError(ValueError):
    """An operation was asked to produce more terms than its inputs carry."""


class CertificateError(RuntimeError):
    """A mathematical certificate failed (dimension, irreducibility,
    eigenvalue pairing, lift discrepancy).  Never recoverable by retry."""


class IrreducibilityUndetermined(CertificateError):
    """Neither an irreducibility certificate nor a factor was found."""


class ConfigError(ValueError):
    """Invalid run configuration."""
