"""Delimited output and figures for the command line driver.

CSV cells carry 17 significant digits; JSON floats use the shortest exact
round-trip form.  Figures render through the Agg backend straight to SVG
files with a fixed hash salt and no timestamp metadata, so reruns produce
byte-identical artifacts.
"""

from __future__ import annotations

import json
import math


def fmt(x):
    """17-significant-digit decimal form of a float."""
    return format(float(x), ".17g")


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int,)):
        return str(v)
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _jsonable(obj):
    import numpy as np

    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return None if math.isnan(x) else x
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Artifact writers.

def eigenvalues_csv(path, eigs, part):
    header = ["index", "lambda", "k_re", "k_im", "multiplicity",
              "edge", "n", "mu"]
    kv = eigs.k_values
    rows = []
    for j in range(eigs.count):
        rows.append([j, float(eigs.values[j]), float(kv[j].real),
                     float(kv[j].imag), int(eigs.multiplicities[j]),
                     int(part.edges[j]), int(part.ns[j]), float(part.mu[j])])
    write_csv(path, header, rows)


def partition_json(path, part):
    entries = [{"edge": int(e), "n": int(n), "mu": float(m), "lambda": float(v)}
               for e, n, m, v in zip(part.edges, part.ns, part.mu, part.values)]
    write_json(path, {
        "level": float(part.level),
        "disorder_flag": bool(part.disorder_flag),
        "entries": entries,
    })


def trace_terms_csv(path, terms):
    header = ["edge", "n", "mu", "lambda_q", "lambda_0", "term"]
    rows = [[int(e), int(n), float(m), float(lq), float(l0), float(t)]
            for e, n, m, lq, l0, t
            in zip(terms.edges, terms.ns, terms.mu, terms.lam_q,
                   terms.lam_0, terms.terms)]
    write_csv(path, header, rows)


def trace_summary_json(path, report):
    write_json(path, {
        "rhs": report.rhs,
        "levels": report.levels,
        "partial_sums": report.partial_sums,
        "errors": report.errors,
        "final_error": report.final_error,
        "fit_c": report.fit_c,
        "fit_alpha": report.fit_alpha,
        "contour_value": report.contour_value,
        "contour_delta": report.contour_delta,
        "level": report.terms.level,
        "disorder_flag": report.terms.disorder_flag,
        "n_terms": len(report.terms),
    })


def asymptotics_csv(path, rows):
    header = ["kind", "edges", "ns", "mu", "measured", "predicted",
              "defect", "low_confidence", "dropped"]
    out = []
    for r in rows:
        out.append([
            r["kind"],
            "+".join(str(e) for e in r["edges"]),
            "+".join(str(n) for n in r["ns"]),
            float(r["mu"]), float(r["measured"]), float(r["predicted"]),
            float(r["defect"]), bool(r["low_confidence"]),
            "+".join(f"{i}:{j}" for i, j in r["dropped"]) or "-",
        ])
    write_csv(path, header, out)


# ---------------------------------------------------------------------------
# Figures.

def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=True)
    matplotlib.rcParams["svg.hashsalt"] = "qgtrace"
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})


def convergence_figure(report, path):
    """Log-log error decay of the partial sums with the fitted tail."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    mask = report.errors > 0
    ax.loglog(report.levels[mask], report.errors[mask], "o-", label="|S_p - rhs|")
    if math.isfinite(report.fit_alpha):
        guide = report.fit_c * report.levels ** (-report.fit_alpha)
        ax.loglog(report.levels, guide, "--",
                  label=f"fit ~ N^(-{report.fit_alpha:.2f})")
    ax.set_xlabel("level N_p")
    ax.set_ylabel("partial sum error")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def spectrum_figure(part, path):
    """Paired eigenvalues against their sine-zero grid slots."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    for edge in sorted(set(int(e) for e in part.edges)):
        ns, lams = part.subsequence(edge)
        ax.plot(ns, lams, "o", ms=3, label=f"edge {edge}")
    ax.set_xlabel("index n within the subsequence")
    ax.set_ylabel("lambda")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def asymptotics_figure(rows, path):
    """Prediction defects against mu with a 1/mu^2 guide."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    mus = [r["mu"] for r in rows if r["defect"] != 0]
    defs = [abs(r["defect"]) for r in rows if r["defect"] != 0]
    if mus:
        ax.loglog(mus, defs, "o", ms=3, label="|measured - predicted|")
        lo, hi = min(mus), max(mus)
        scale = max(d * m * m for d, m in zip(defs, mus))
        xs = [lo, hi]
        ax.loglog(xs, [scale / x ** 2 for x in xs], "--", label="~ mu^-2")
    ax.set_xlabel("mu")
    ax.set_ylabel("defect")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)
