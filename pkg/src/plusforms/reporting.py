"""Analysis of coefficient streams and report emission.

analyze_stream runs the full statistics battery on one stream:
histograms and four-family fits per box width, optional consecutive
subset fits, optional squarefree-versus-prime comparison, sign counts
and independence ratios.  Results serialize to JSON; the report stage
aggregates JSONs into one structured-text summary, emits plain-text
plot scripts that overlay the histogram files with the fitted curves,
and renders the same overlays as PNG figures.
"""

from __future__ import annotations

import json
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .fitting import fit_models
from .histogram import Histogram, write_histogram
from .models import PARAM_NAMES, model_eval
from .signstats import independence_ratio, sign_report
from .streams import prime_filter, subset_split

DEFAULT_WIDTHS = (0.001, 0.0001, 0.00001)
DEFAULT_INTERVALS = ((0.1, 0.5), (0.5, 1.0), (1.0, 2.0))


def _fit_payload(result):
    return {
        "params": {k: float(v) for k, v in result.params.items()},
        "ssr": result.ssr,
        "rms": result.rms,
        "iterations": result.iterations,
        "converged": result.converged,
        "n_points": result.n_points,
        "n_params": result.n_params,
        "message": result.message,
    }


def analyze_stream(stream, widths=DEFAULT_WIDTHS, model_tags=None,
                   subsets=1, prime_only=False,
                   intervals=DEFAULT_INTERVALS):
    """Full statistics battery for one stream; returns a JSON-ready dict."""
    result = {
        "label": stream.label,
        "two_k": stream.two_k,
        "ell": stream.ell,
        "bound": stream.bound,
        "count": len(stream),
        "widths": {},
    }
    values = stream.values
    for width in widths:
        hist = Histogram.from_values(values, width)
        fits = fit_models(hist, model_tags)
        result["widths"][_width_key(width)] = {
            "width": width,
            "n_bins": len(hist),
            "fits": {tag: _fit_payload(f) for tag, f in fits.items()},
        }
    rep = sign_report(values)
    result["sign"] = {"n_pos": rep.n_pos, "n_neg": rep.n_neg,
                      "n_zero": rep.n_zero,
                      "pos_fraction": rep.pos_fraction}
    result["independence"] = []
    for lo, hi in intervals:
        ratio = independence_ratio(values, lo, hi)
        entry = {"lo": lo, "hi": hi, "n_in": ratio.n_in,
                 "n_pos": ratio.n_pos, "ratio": ratio.ratio,
                 "wilson": list(ratio.wilson) if ratio.has_data else None}
        result["independence"].append(entry)
    if subsets > 1:
        rows = []
        for piece in subset_split(stream, subsets):
            hist = Histogram.from_values(piece.values, widths[0])
            fits = fit_models(hist, model_tags)
            rows.append({"count": len(piece),
                         "fits": {t: _fit_payload(f)
                                  for t, f in fits.items()}})
        result["subsets"] = {"count": subsets, "width": widths[0],
                             "rows": rows}
    if prime_only:
        primes = prime_filter(stream)
        hist_all = Histogram.from_values(values, widths[0])
        hist_p = Histogram.from_values(primes.values, widths[0])
        result["prime"] = {
            "width": widths[0],
            "squarefree_count": len(stream),
            "prime_count": len(primes),
            "squarefree_fits": {t: _fit_payload(f) for t, f in
                                fit_models(hist_all, model_tags).items()},
            "prime_fits": {t: _fit_payload(f) for t, f in
                           fit_models(hist_p, model_tags).items()},
        }
    return result


def _width_key(width):
    return f"{width:.10g}"


def _slug(label):
    return label.replace("/", "_").replace("(", "_").replace(")", "")


def write_analysis(stream, analysis, out_dir):
    """Write histogram files, fit report, plot scripts and JSON."""
    os.makedirs(out_dir, exist_ok=True)
    slug = _slug(analysis["label"])
    for key, block in analysis["widths"].items():
        width = block["width"]
        hist = Histogram.from_values(stream.values, width)
        hist_name = f"hist_{slug}_w{key}.tsv"
        write_histogram(hist, os.path.join(out_dir, hist_name))
        block["histogram_file"] = hist_name
        script = _plot_script(hist_name, analysis["label"], block)
        script_name = f"plot_{slug}_w{key}.txt"
        with open(os.path.join(out_dir, script_name), "w") as fh:
            fh.write(script)
        block["plot_script"] = script_name
    fits_path = os.path.join(out_dir, f"fits_{slug}.txt")
    with open(fits_path, "w") as fh:
        fh.write(render_fit_report(analysis))
    json_path = os.path.join(out_dir, f"analysis_{slug}.json")
    with open(json_path, "w") as fh:
        json.dump(analysis, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return json_path


_CURVE_FORMULAS = {
    "GGG": "{b}*exp(-(({d}+x**2)**{a})/{c})",
    "GG": "{b}*exp(-((x**2)**{a})/{c})",
    "Laplace": "{b}*exp(-abs(x)/{c})",
    "Cauchy": "{a}/({b}+({c}*x)**2)",
}


def _plot_script(hist_name, label, block):
    lines = [f"# overlay of {hist_name} with fitted curves for {label}",
             f"# box width {block['width']:.10g}; histogram lines are "
             f"'center<TAB>count'"]
    plot_terms = [f"'{hist_name}' using 1:2 with boxes title 'data'"]
    for tag, fitp in sorted(block["fits"].items()):
        if not fitp["params"]:
            continue
        formula = _CURVE_FORMULAS[tag].format(
            **{k: f"({v:.10g})" for k, v in fitp["params"].items()})
        lines.append(f"{tag}(x) = {formula}")
        plot_terms.append(f"{tag}(x) title '{tag}'")
    lines.append("plot " + ", \\\n     ".join(plot_terms))
    return "\n".join(lines) + "\n"


def render_fit_report(analysis):
    lines = [f"fit report for {analysis['label']}",
             f"bound {analysis['bound']}, {analysis['count']} recorded "
             f"coefficients", ""]
    for key, block in sorted(analysis["widths"].items(),
                             key=lambda kv: -kv[1]["width"]):
        lines.append(f"box width {key} ({block['n_bins']} nonempty bins)")
        for tag, fitp in sorted(block["fits"].items()):
            lines.append(_fit_line(tag, fitp))
        lines.append("")
    sign = analysis["sign"]
    lines.append("sign statistics")
    lines.append(f"  positive {sign['n_pos']}   negative {sign['n_neg']}"
                 f"   zero {sign['n_zero']}")
    if sign["pos_fraction"] is not None:
        lines.append(f"  positive fraction {sign['pos_fraction']:.10g}")
    else:
        lines.append("  positive fraction undefined (no signed values)")
    lines.append("")
    lines.append("independence ratios (95% Wilson intervals)")
    for entry in analysis["independence"]:
        if entry["ratio"] is None:
            lines.append(f"  |b| in [{entry['lo']:g}, {entry['hi']:g}]: "
                         f"no data in interval")
        else:
            lo, hi = entry["wilson"]
            lines.append(
                f"  |b| in [{entry['lo']:g}, {entry['hi']:g}]: "
                f"ratio {entry['ratio']:.10g} "
                f"({entry['n_pos']}/{entry['n_in']}), "
                f"Wilson [{lo:.10g}, {hi:.10g}]")
    if "subsets" in analysis:
        lines.append("")
        lines.append(f"consecutive subsets (count "
                     f"{analysis['subsets']['count']}, width "
                     f"{analysis['subsets']['width']:.10g})")
        for j, row in enumerate(analysis["subsets"]["rows"], start=1):
            lines.append(f"  subset {j} ({row['count']} entries)")
            for tag, fitp in sorted(row["fits"].items()):
                lines.append("  " + _fit_line(tag, fitp))
    if "prime" in analysis:
        block = analysis["prime"]
        lines.append("")
        lines.append(f"squarefree versus prime indices (width "
                     f"{block['width']:.10g})")
        lines.append(f"  squarefree ({block['squarefree_count']} entries)")
        for tag, fitp in sorted(block["squarefree_fits"].items()):
            lines.append("  " + _fit_line(tag, fitp))
        lines.append(f"  prime ({block['prime_count']} entries)")
        for tag, fitp in sorted(block["prime_fits"].items()):
            lines.append("  " + _fit_line(tag, fitp))
    return "\n".join(lines) + "\n"


def _fit_line(tag, fitp):
    if not fitp["params"]:
        return (f"  {tag:<8} failed: {fitp['message']}")
    params = "  ".join(f"{name}={fitp['params'][name]:.10g}"
                       for name in PARAM_NAMES[tag])
    flag = "" if fitp["converged"] else "  [not converged]"
    return (f"  {tag:<8} {params}  rms={fitp['rms']:.10g}  "
            f"iterations={fitp['iterations']}{flag}")


# ---------------------------------------------------------------------------
# consolidated report with figures
# ---------------------------------------------------------------------------

def collect_analyses(run_dir):
    out = []
    for name in sorted(os.listdir(run_dir)):
        if name.startswith("analysis_") and name.endswith(".json"):
            with open(os.path.join(run_dir, name)) as fh:
                out.append(json.load(fh))
    return out


def write_report(run_dir, figures=True):
    """Aggregate analyze outputs into report.txt plus rendered figures.

    Returns the report path, or None with a message when there is
    nothing to report.
    """
    analyses = collect_analyses(run_dir)
    report_path = os.path.join(run_dir, "report.txt")
    if not analyses:
        with open(report_path, "w") as fh:
            fh.write("nothing to report: no analysis outputs found in "
                     f"{run_dir}\n")
        return report_path
    missing = []
    lines = ["consolidated analysis report", "=" * 40, ""]
    figure_files = []
    for analysis in analyses:
        lines.append(render_fit_report(analysis).rstrip("\n"))
        lines.append("")
        build_report = os.path.join(run_dir, "build_report.txt")
        for key, block in analysis["widths"].items():
            hist_file = block.get("histogram_file")
            if not hist_file:
                continue
            hist_path = os.path.join(run_dir, hist_file)
            if not os.path.exists(hist_path):
                missing.append(hist_file)
                continue
            if figures:
                fig_name = _render_figure(run_dir, analysis, block,
                                          hist_path)
                figure_files.append(fig_name)
    if os.path.exists(os.path.join(run_dir, "build_report.txt")):
        lines.append("build certificates: see build_report.txt")
        lines.append("")
    if figure_files:
        lines.append("figures")
        for name in figure_files:
            lines.append(f"  {name}")
        lines.append("")
    if missing:
        lines.append("missing inputs")
        for name in missing:
            lines.append(f"  {name}")
        lines.append("")
    with open(report_path, "w") as fh:
        fh.write("\n".join(lines))
    return report_path


def _render_figure(run_dir, analysis, block, hist_path):
    data = np.loadtxt(hist_path)
    data = np.atleast_2d(data)
    centers, counts = data[:, 0], data[:, 1]
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.bar(centers, counts, width=block["width"], color="0.8",
           label="data", linewidth=0)
    xs = np.linspace(centers.min(), centers.max(), 800)
    for tag, fitp in sorted(block["fits"].items()):
        if not fitp["params"] or not fitp["converged"]:
            continue
        try:
            ys = model_eval(tag, fitp["params"], xs)
        except ValueError:
            continue
        ax.plot(xs, ys, label=tag, linewidth=1.2)
    ax.set_xlabel("normalized coefficient")
    ax.set_ylabel("count")
    ax.set_title(f"{analysis['label']}, box width "
                 f"{block['width']:.10g}")
    ax.legend()
    fig.tight_layout()
    os.makedirs(os.path.join(run_dir, "figures"), exist_ok=True)
    name = os.path.join("figures",
                        f"overlay_{_slug(analysis['label'])}_w"
                        f"{_width_key(block['width'])}.png")
    fig.savefig(os.path.join(run_dir, name), dpi=110)
    plt.close(fig)
    return name
