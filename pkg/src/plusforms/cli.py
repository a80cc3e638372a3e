"""Command line interface: build, analyze, report.

Exit codes: 0 success, 2 configuration error, 3 mathematical
certificate failure, 4 fit non-convergence (and nothing worse).
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import CertificateError, ConfigError
from .fitting import FitNonConvergence
from .pipeline import BuildConfig, run_build
from .reporting import (DEFAULT_INTERVALS, DEFAULT_WIDTHS, analyze_stream,
                        write_analysis, write_report)
from .streams import read_stream

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CERTIFICATE = 3
EXIT_FIT = 4


def _parse_widths(text):
    try:
        widths = tuple(float(w) for w in text.split(","))
    except ValueError:
        raise ConfigError(f"invalid width list {text!r}")
    if not widths or any(w <= 0 for w in widths):
        raise ConfigError("box widths must be positive")
    return widths


def _parse_models(text):
    from .models import MODEL_TAGS
    tags = tuple(t.strip() for t in text.split(","))
    bad = [t for t in tags if t not in MODEL_TAGS]
    if bad:
        raise ConfigError(
            f"unknown models {bad}; choose from {list(MODEL_TAGS)}")
    return tags


def _parse_intervals(items):
    if not items:
        return DEFAULT_INTERVALS
    out = []
    for item in items:
        try:
            lo, _, hi = item.partition(":")
            lo, hi = float(lo), float(hi)
        except ValueError:
            raise ConfigError(f"invalid interval {item!r}; use LO:HI")
        if not 0 < lo <= hi:
            raise ConfigError(f"interval {item!r} must satisfy 0 < lo <= hi")
        out.append((lo, hi))
    return tuple(out)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plusforms",
        description="Exact plus-space Hecke eigenforms on Gamma0(4) and "
                    "distribution analysis of their normalized "
                    "coefficients.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser(
        "build", help="compute eigenforms, verify them, write coefficient "
                      "files")
    p_build.add_argument("--weight", type=int, required=True, action="append",
                         help="weight numerator two_k (13..61 odd, not 15); "
                              "repeatable")
    p_build.add_argument("--bound", type=int, default=10 ** 6,
                         help="record coefficients at squarefree indices "
                              "up to this bound (default 1e6)")
    p_build.add_argument("--out", required=True, help="output directory")
    p_build.add_argument("--threads", type=int, default=2)
    p_build.add_argument("--lift-depth", type=int, default=500,
                         help="Shimura lift verification depth cap")
    p_build.add_argument("--seed", type=int, default=0,
                         help="seed recorded in the run configuration "
                              "(synthetic tests only; builds are exact)")

    p_an = sub.add_parser("analyze",
                          help="histograms, fits, sign statistics for "
                               "coefficient files")
    p_an.add_argument("files", nargs="+", help="coefficient files")
    p_an.add_argument("--widths", default=",".join(str(w) for w in
                                                   DEFAULT_WIDTHS))
    p_an.add_argument("--models", default="GGG,GG,Laplace,Cauchy")
    p_an.add_argument("--subsets", type=int, default=1,
                      help="split into this many consecutive subsets and "
                           "fit each (default 1: no split)")
    p_an.add_argument("--prime-only", action="store_true",
                      help="add the squarefree-versus-prime comparison")
    p_an.add_argument("--interval", action="append", default=[],
                      help="independence-ratio interval LO:HI; repeatable")
    p_an.add_argument("--threads", type=int, default=1)
    p_an.add_argument("--seed", type=int, default=0)
    p_an.add_argument("--out", required=True)

    p_rep = sub.add_parser("report",
                           help="consolidate analyze outputs, emit plot "
                                "scripts and figures")
    p_rep.add_argument("run_dir")
    p_rep.add_argument("--no-figures", action="store_true")
    return parser


def cmd_build(args):
    config = BuildConfig(two_k_list=tuple(args.weight), bound=args.bound,
                         out_dir=args.out, threads=args.threads,
                         lift_depth=args.lift_depth)
    report = run_build(config)
    for summary in report.summaries:
        lifts = ", ".join(f"t={t} depth={d}" for t, d, _ in
                          summary.lift_reports)
        print(f"built {summary.label}: {summary.stream_count} recorded "
              f"coefficients, lift certificates ok ({lifts})")
    print(f"wall time {report.wall_seconds:.1f} s, report in "
          f"{os.path.join(args.out, 'build_report.txt')}")
    return EXIT_OK


def cmd_analyze(args):
    widths = _parse_widths(args.widths)
    models = _parse_models(args.models)
    intervals = _parse_intervals(args.interval)
    if args.subsets < 1:
        raise ConfigError("--subsets must be >= 1")
    had_fit_trouble = False
    for path in args.files:
        if not os.path.exists(path):
            raise ConfigError(f"coefficient file not found: {path}")
        stream = read_stream(path)
        analysis = analyze_stream(stream, widths=widths, model_tags=models,
                                  subsets=args.subsets,
                                  prime_only=args.prime_only,
                                  intervals=intervals)
        json_path = write_analysis(stream, analysis, args.out)
        for block in analysis["widths"].values():
            for fitp in block["fits"].values():
                if not fitp["converged"]:
                    had_fit_trouble = True
        print(f"analyzed {stream.label}: {json_path}")
    return EXIT_FIT if had_fit_trouble else EXIT_OK


def cmd_report(args):
    if not os.path.isdir(args.run_dir):
        raise ConfigError(f"run directory not found: {args.run_dir}")
    path = write_report(args.run_dir, figures=not args.no_figures)
    with open(path) as fh:
        first = fh.readline().rstrip()
    print(f"{first}  ->  {path}")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "build":
            return cmd_build(args)
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "report":
            return cmd_report(args)
        raise ConfigError(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CertificateError as exc:
        print(f"mathematical certificate failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except FitNonConvergence as exc:
        print(f"fit did not converge: {exc}", file=sys.stderr)
        return EXIT_FIT


if __name__ == "__main__":
    sys.exit(main())
