"""Build orchestration: from weights to verified coefficient files.

The cheap eigen-split runs in the parent process; the expensive
coefficient expansions are grouped by weight parity (each parity shares
one generator power chain) and dispatched to worker processes.  Workers
finish everything downstream that needs the big exact data, namely the
invariant checks, the Shimura lift certificates and the normalized
streams, and return only small summaries, so nothing large crosses
process boundaries.
"""

from __future__ import annotations

import os
import resource
import time
from dataclasses import dataclass, field
from math import isqrt

from .assembly import AssemblyJob, assemble_batch
from .errors import CertificateError, ConfigError
from .level1 import level1_generic
from .plusspace import (CoefficientStore, EigenData, finalize_forms,
                        recorded_residue)
from .shimura import default_lift_parameters, verify_lift
from .streams import normalize, write_stream

SUPPORTED_TWO_K = tuple(k for k in range(13, 62, 2) if k != 15)


def validate_two_k(two_k):
    if two_k % 2 == 0 or not 13 <= two_k <= 61:
        raise ConfigError(
            f"weight numerator must be odd and between 13 and 61, got "
            f"{two_k}")
    if two_k == 15:
        raise ConfigError(
            "weight 15/2 has an empty plus cusp space (dimension 0)")
    return two_k


@dataclass
class BuildConfig:
    two_k_list: tuple
    bound: int = 10 ** 6
    out_dir: str | None = None
    threads: int = 2
    lift_depth: int = 500
    lift_count: int = 3
    force_full_lift_depth: bool = False
    emit_streams: bool = True
    digits: int = 12

    def validate(self):
        for two_k in self.two_k_list:
            validate_two_k(two_k)
        if self.bound < 100:
            raise ConfigError(f"bound must be >= 100, got {self.bound}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.lift_depth < 1 or self.lift_count < 0:
            raise ConfigError("invalid lift verification settings")
        return self


@dataclass
class FormSummary:
    label: str
    two_k: int
    ell: int
    field_degree: int
    eigenvalue_floats: dict
    lift_reports: list
    stream_file: str | None = None
    stream_count: int = 0


@dataclass
class BuildReport:
    bound: int
    summaries: list = field(default_factory=list)
    wall_seconds: float = 0.0
    peak_rss_mb: float = 0.0
    dimensions: dict = field(default_factory=dict)


def _candidate_lift_parameters(ell, count):
    """First `count` squarefree recorded indices (a(t) != 0 pending)."""
    from .shimura import is_squarefree
    out = []
    t = recorded_residue(ell)
    while len(out) < count:
        if is_squarefree(t):
            out.append(t)
        t += 4
    return out


def plan_precision(ell, config):
    """Expansion precision needed for the stream bound and lift depths."""
    need = config.bound + 1
    if config.lift_count:
        ts = _candidate_lift_parameters(ell, config.lift_count)
        if config.force_full_lift_depth:
            need = max(need, max(ts) * config.lift_depth ** 2 + 1)
    return need


def _lift_depth_for(t, precision, depth_cap):
    return min(depth_cap, isqrt((precision - 1) // t))


def _build_group(eigen_list, precision, config):
    """Assemble one parity group and finish its per-weight work."""
    jobs = []
    for eigen in eigen_list:
        rows, _ = eigen.scalar_rows()
        jobs.append(AssemblyJob(eigen.ell, eigen.ell, rows))
    coordinate_packs = assemble_batch(jobs, precision)

    out = []
    for eigen in eigen_list:
        store = CoefficientStore(eigen.field,
                                 coordinate_packs.pop(eigen.ell), precision)
        forms = finalize_forms(eigen, store, digits=config.digits)
        level1 = level1_generic(2 * eigen.ell, config.lift_depth + 1,
                                field=eigen.field)
        lift_reports = []
        if config.lift_count:
            ts = default_lift_parameters(forms[0], config.lift_count)
            for t in ts:
                depth = _lift_depth_for(t, precision, config.lift_depth)
                report = verify_lift(forms[0], t, depth,
                                     level1_form=level1)
                if not report.ok:
                    raise CertificateError(
                        f"Shimura lift certificate failed for "
                        f"{forms[0].label} at t={t}: discrepancy "
                        f"{report.max_abs_discrepancy}")
                lift_reports.append((t, depth, True))
        for form in forms:
            summary = FormSummary(
                label=form.label,
                two_k=form.two_k,
                ell=form.ell,
                field_degree=form.field.degree,
                eigenvalue_floats={
                    p: form.embedding.float_value(lam)
                    for p, lam in form.eigenvalues.items()},
                lift_reports=lift_reports,
            )
            if config.emit_streams and config.out_dir:
                stream = normalize(form, config.bound)
                name = _stream_filename(form.label)
                path = os.path.join(config.out_dir, name)
                write_stream(stream, path)
                summary.stream_file = name
                summary.stream_count = len(stream)
            out.append(summary)
        del store
    return out


def _stream_filename(label):
    return label.replace("/", "_").replace("(", "_").replace(")", "") + \
        ".coeffs"


def _worker(payload):
    eigen_list, precision, config = payload
    return _build_group(eigen_list, precision, config)


def run_build(config: BuildConfig) -> BuildReport:
    config.validate()
    start = time.monotonic()
    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)

    report = BuildReport(bound=config.bound)
    groups = {0: [], 1: []}
    precisions = {0: 0, 1: 0}
    for two_k in sorted(set(config.two_k_list)):
        ell = (two_k - 1) // 2
        eigen = EigenData(ell)
        report.dimensions[two_k] = eigen.dimension
        if eigen.dimension == 0:
            continue
        parity = ell % 2
        groups[parity].append(eigen)
        precisions[parity] = max(precisions[parity],
                                 plan_precision(ell, config))

    payloads = [(eigens, precisions[parity], config)
                for parity, eigens in groups.items() if eigens]
    if config.threads > 1 and len(payloads) > 1:
        import multiprocessing as mp
        with mp.get_context("fork").Pool(min(config.threads,
                                             len(payloads))) as pool:
            results = pool.map(_worker, payloads)
    else:
        results = [_worker(p) for p in payloads]
    for chunk in results:
        report.summaries.extend(chunk)
    report.summaries.sort(key=lambda s: (s.two_k, s.label))
    report.wall_seconds = time.monotonic() - start
    report.peak_rss_mb = resource.getrusage(
        resource.RUSAGE_SELF).ru_maxrss / 1024
    if config.out_dir:
        _write_build_report(report, config)
    return report


def _write_build_report(report, config):
    path = os.path.join(config.out_dir, "build_report.txt")
    lines = ["plusforms build report", "=" * 40,
             f"bound               {config.bound}",
             f"weights             " +
             ", ".join(f"{k}/2" for k in sorted(set(config.two_k_list))),
             ""]
    lines.append("dimensions")
    for two_k, dim in sorted(report.dimensions.items()):
        lines.append(f"  {two_k}/2: {dim}")
    lines.append("")
    for s in report.summaries:
        lines.append(f"form {s.label}  (Hecke field degree "
                     f"{s.field_degree})")
        for p, lam in sorted(s.eigenvalue_floats.items()):
            lines.append(f"  T({p}^2) eigenvalue  {lam:.10g}")
        for t, depth, ok in s.lift_reports:
            status = "exact match" if ok else "FAILED"
            lines.append(f"  lift certificate t={t} depth={depth}: "
                         f"{status}")
        if s.stream_file:
            lines.append(f"  stream  {s.stream_file}  "
                         f"({s.stream_count} entries)")
        lines.append("")
    lines.append("timing")
    lines.append(f"  wall time        {report.wall_seconds:.1f} s")
    lines.append(f"  peak memory      {report.peak_rss_mb:.0f} MB "
                 f"(parent process)")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
