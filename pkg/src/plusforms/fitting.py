"""Damped least-squares fitting of the density families to histograms.

Levenberg-Marquardt over the nonempty bins, with points (bin center,
count) and unweighted residuals.  The Jacobian comes from central
finite differences with step max(1e-6, 1e-6 |param|); positivity of b
and c in the exponential families is enforced by optimizing their
logarithms, while d and all Cauchy parameters float freely.  Damping
starts at 1e-3, multiplies by 10 on a rejected step and divides by 10
on acceptance; convergence is a relative SSR decrease below 1e-10,
with a hard cap of 200 iterations.  Proposals that leave the model
domain or produce non-finite values halve the step and retry, failing
hard after 20 consecutive failures.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .models import PARAM_NAMES, ModelDomainError, model_eval, params_dict

DAMPING_START = 1e-3
DAMPING_LIMIT = 1e15
SSR_RELATIVE_TOL = 1e-10
MAX_ITERATIONS = 200
MAX_CONSECUTIVE_FAILURES = 20

_LOG_PARAMS = {
    "GGG": ("b", "c"),
    "GG": ("b", "c"),
    "Laplace": ("b", "c"),
    "Cauchy": (),
}


class FitNonConvergence(RuntimeError):
    """The optimizer could not produce a usable fit."""


@dataclass
class FitResult:
    model: str
    params: dict
    ssr: float
    rms: float
    iterations: int
    converged: bool
    n_points: int
    n_params: int
    message: str = ""

    def param_vector(self):
        return [self.params[name] for name in PARAM_NAMES[self.model]]


def default_init(tag, histogram):
    """The documented default starting point for each family."""
    centers, counts = histogram.centers_counts()
    if len(centers) == 0:
        raise ValueError("empty histogram")
    peak = float(counts.max())
    mean_abs = float(np.sum(np.abs(centers) * counts) / np.sum(counts))
    if mean_abs <= 0:
        mean_abs = histogram.width
    if tag == "GGG":
        return {"a": 0.5, "b": peak, "c": mean_abs, "d": 0.01}
    if tag == "GG":
        return {"a": 0.5, "b": peak, "c": mean_abs}
    if tag == "Laplace":
        return {"b": peak, "c": mean_abs}
    if tag == "Cauchy":
        half = peak / 2.0
        above = centers[counts >= half]
        h = (above.max() - above.min()) / 2 if len(above) > 1 else 0.0
        if h <= 0:
            h = histogram.width
        return {"a": peak * h * h, "b": h * h, "c": 1.0}
    raise ValueError(f"unknown model tag {tag!r}")


def _to_internal(tag, vec):
    out = list(map(float, vec))
    for pos, name in enumerate(PARAM_NAMES[tag]):
        if name in _LOG_PARAMS[tag]:
            if out[pos] <= 0:
                raise ModelDomainError(
                    f"{tag} parameter {name} must be positive")
            out[pos] = np.log(out[pos])
    return np.array(out, dtype=np.float64)


def _to_external(tag, vec):
    out = list(map(float, vec))
    for pos, name in enumerate(PARAM_NAMES[tag]):
        if name in _LOG_PARAMS[tag]:
            out[pos] = np.exp(out[pos])
    return out


def fit(tag, histogram, init=None, max_iterations=MAX_ITERATIONS):
    """Levenberg-Marquardt fit of one family to one histogram."""
    names = PARAM_NAMES[tag]
    centers, counts = histogram.centers_counts()
    n_points, n_params = len(centers), len(names)
    if n_points <= n_params:
        raise ValueError(
            f"fit of {tag} needs more than {n_params} nonempty bins, "
            f"got {n_points}")
    if init is None:
        init = default_init(tag, histogram)
    if isinstance(init, dict):
        init = [init[name] for name in names]
    theta = _to_internal(tag, init)

    def residuals(vec):
        try:
            ext = _to_external(tag, vec)
            values = model_eval(tag, ext, centers)
        except (ModelDomainError, FloatingPointError):
            return None
        if not np.all(np.isfinite(values)):
            return None
        return counts - values

    r = residuals(theta)
    if r is None:
        raise FitNonConvergence(
            f"{tag} initial parameters are outside the model domain")
    ssr = float(r @ r)
    damping = DAMPING_START
    iterations = 0
    converged = False
    message = ""
    # consecutive proposal rounds in which every halved step stayed
    # outside the model domain; any finite evaluation resets it
    failed_rounds = 0

    while iterations < max_iterations:
        iterations += 1
        if ssr == 0.0:
            converged = True
            message = "exact fit"
            break
        jac = np.empty((n_points, n_params))
        bad_jacobian = False
        for k in range(n_params):
            h = max(1e-6, 1e-6 * abs(theta[k]))
            up = theta.copy()
            up[k] += h
            down = theta.copy()
            down[k] -= h
            ru, rd = residuals(up), residuals(down)
            if ru is not None and rd is not None:
                jac[:, k] = (rd - ru) / (2 * h)   # d(model)/d(theta)
            elif ru is not None:
                # one-sided difference against a domain wall
                jac[:, k] = (r - ru) / h
            elif rd is not None:
                jac[:, k] = (rd - r) / h
            else:
                bad_jacobian = True
                break
        if bad_jacobian:
            failed_rounds += 1
            if failed_rounds >= MAX_CONSECUTIVE_FAILURES:
                raise FitNonConvergence(
                    f"{tag}: {failed_rounds} consecutive evaluation "
                    f"failures")
            damping *= 10
            continue

        jtj = jac.T @ jac
        jtr = jac.T @ r
        diag = np.diag(jtj).copy()
        diag[diag <= 0] = 1e-30

        stepped = False
        while damping <= DAMPING_LIMIT:
            try:
                delta = np.linalg.solve(jtj + damping * np.diag(diag), jtr)
            except np.linalg.LinAlgError:
                damping *= 10
                continue
            candidate = theta + delta
            r_new = residuals(candidate)
            scale = 1.0
            while r_new is None and scale > 2.0 ** -12:
                scale /= 2
                candidate = theta + scale * delta
                r_new = residuals(candidate)
            if r_new is None:
                failed_rounds += 1
                if failed_rounds >= MAX_CONSECUTIVE_FAILURES:
                    raise FitNonConvergence(
                        f"{tag}: {failed_rounds} consecutive evaluation "
                        f"failures")
                damping *= 10
                continue
            failed_rounds = 0
            ssr_new = float(r_new @ r_new)
            if ssr_new < ssr:
                improvement = (ssr - ssr_new) / ssr
                theta, r, ssr = candidate, r_new, ssr_new
                damping = max(damping / 10, 1e-300)
                stepped = True
                if improvement < SSR_RELATIVE_TOL:
                    converged = True
                    message = "relative SSR decrease below tolerance"
                break
            damping *= 10
        if converged:
            break
        if not stepped:
            converged = True
            message = "damping exhausted without further improvement"
            break

    if iterations >= max_iterations and not converged:
        # the documented stopping rule: the iteration cap is a normal
        # termination, not a failure
        converged = True
        message = "iteration cap reached"
    external = _to_external(tag, theta)
    rms = float(np.sqrt(ssr / (n_points - n_params)))
    return FitResult(tag, params_dict(tag, external), ssr, rms, iterations,
                     converged, n_points, n_params, message)


def rms(fit_result):
    """sqrt(SSR / (points - parameters)); requires a converged fit."""
    if not fit_result.converged:
        raise ValueError("rms of a non-converged fit is undefined")
    return fit_result.rms


def warm_start_candidates(tag, fitted):
    """Nested warm starts: GG from Laplace (a = 1/2), GGG from GG
    (d = 0).  Returns a list of init dicts."""
    out = []
    if tag == "GG" and "Laplace" in fitted:
        lp = fitted["Laplace"].params
        out.append({"a": 0.5, "b": lp["b"], "c": lp["c"]})
    if tag == "GGG" and "GG" in fitted:
        gg = fitted["GG"].params
        out.append({"a": gg["a"], "b": gg["b"], "c": gg["c"], "d": 0.0})
    return out


def fit_models(histogram, tags=None, extra_inits=None):
    """Fit several families with nested warm starts.

    Laplace is fitted before GG and GG before GGG so each richer family
    starts from (and can only improve on) the best nested optimum; this
    preserves SSR_GGG <= SSR_GG <= SSR_Laplace at the optima.  Returns
    {tag: FitResult}; non-convergence is recorded per model rather than
    raised, as the message of a FitResult with converged=False when the
    optimizer degenerates, or re-raised only when nothing at all fits.
    """
    from .models import MODEL_TAGS as ALL_TAGS
    if tags is None:
        tags = ALL_TAGS
    order = [t for t in ("Laplace", "GG", "GGG", "Cauchy") if t in tags]
    fitted = {}
    errors = {}
    for tag in order:
        candidates = [None]
        candidates.extend(warm_start_candidates(tag, fitted))
        if extra_inits and tag in extra_inits:
            candidates.append(extra_inits[tag])
        best = None
        best_error = None
        for cand in candidates:
            try:
                result = fit(tag, histogram, init=cand)
            except (FitNonConvergence, ValueError, ModelDomainError) as e:
                best_error = e
                continue
            if best is None or result.ssr < best.ssr:
                best = result
        if best is None:
            errors[tag] = best_error
        else:
            fitted[tag] = best
    if errors and not fitted:
        raise FitNonConvergence(
            "; ".join(f"{t}: {e}" for t, e in errors.items()))
    for tag, err in errors.items():
        fitted[tag] = FitResult(tag, {}, float("nan"), float("nan"), 0,
                                False, len(histogram.bins),
                                len(PARAM_NAMES[tag]), str(err))
    return fitted
