"""The four candidate density families.

    GGG(x)     = b * exp(-(d + x^2)^a / c)
    GG(x)      = b * exp(-(x^2)^a / c)
    Laplace(x) = b * exp(-|x| / c)
    Cauchy(x)  = a / (b + (c x)^2)

GG is GGG with d = 0 and Laplace is GG with a = 1/2, which the fitting
layer exploits for warm starts.  Domain violations raise instead of
clamping: c must be positive for the exponential family and b positive
for Cauchy, and GGG requires d + x^2 > 0 wherever it is evaluated.
"""

from __future__ import annotations

import numpy as np

PARAM_NAMES = {
    "GGG": ("a", "b", "c", "d"),
    "GG": ("a", "b", "c"),
    "Laplace": ("b", "c"),
    "Cauchy": ("a", "b", "c"),
}

MODEL_TAGS = tuple(PARAM_NAMES)


class ModelDomainError(ValueError):
    """Parameters outside the model's domain; never silently clamped."""


def _as_vector(tag, params):
    names = PARAM_NAMES[tag]
    if isinstance(params, dict):
        missing = [n for n in names if n not in params]
        if missing:
            raise ValueError(f"{tag} needs parameters {missing}")
        return [float(params[n]) for n in names]
    vec = [float(v) for v in params]
    if len(vec) != len(names):
        raise ValueError(f"{tag} takes {len(names)} parameters")
    return vec


def model_eval(tag, params, x):
    """Evaluate one family at x (scalar or array)."""
    vec = _as_vector(tag, params)
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if tag == "GGG":
        a, b, c, d = vec
        if c <= 0:
            raise ModelDomainError("GGG requires c > 0")
        base = d + x * x
        if np.any(base < 0):
            raise ModelDomainError("GGG requires d + x^2 >= 0")
        if np.any((base == 0) & (a <= 0)):
            raise ModelDomainError("GGG at d + x^2 = 0 requires a > 0")
        out = b * np.exp(-np.power(base, a) / c)
    elif tag == "GG":
        a, b, c = vec
        if c <= 0:
            raise ModelDomainError("GG requires c > 0")
        base = x * x
        if np.any((base == 0) & (a <= 0)):
            raise ModelDomainError("GG at x = 0 requires a > 0")
        out = b * np.exp(-np.power(base, a) / c)
    elif tag == "Laplace":
        b, c = vec
        if c <= 0:
            raise ModelDomainError("Laplace requires c > 0")
        out = b * np.exp(-np.abs(x) / c)
    elif tag == "Cauchy":
        a, b, c = vec
        if b <= 0:
            raise ModelDomainError("Cauchy requires b > 0")
        out = a / (b + (c * x) ** 2)
    else:
        raise ValueError(f"unknown model tag {tag!r}")
    return float(out[0]) if scalar else out


def params_dict(tag, vector):
    return dict(zip(PARAM_NAMES[tag], (float(v) for v in vector)))
