"""Command line driver.

Four subcommands cover the workflow: `spectrum` locates and pairs
eigenvalues, `trace` runs the regularized-sum convergence study, \
`asymptotics` compares measured subsequences against their predictions,
and `verify` cross-checks the winding count of the secular determinant
against the closed-form count of the comparison product.

Exit codes: 0 success, 2 unusable input (arguments or graph file),
3 solver failure (lost roots, coupling without Hermitian form, contour
trouble), 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import GraphSpecError, QGraphError
from .graphio import load_graph
from .graphs import validate_graph


def _add_common(p):
    p.add_argument("--graph", required=True, help="path to the graph JSON file")
    p.add_argument("--kmax", type=float, default=30.0,
                   help="scan eigenvalues up to the first allowed level at or "
                        "above this wavenumber (default 30)")
    p.add_argument("--mode", choices=["auto", "numeric", "zero_potential"],
                   default="auto", help="edge solution route (default auto)")
    p.add_argument("--tol", type=float, default=None,
                   help="relative tolerance for the edge integrator")
    p.add_argument("--epsilon", type=float, default=None,
                   help="sine-zero margin; default derives from the lengths")
    p.add_argument("--out", default=".", help="output directory (default .)")
    p.add_argument("--format", default="csv,json,svg",
                   help="comma list of artifact kinds to write (csv,json,svg)")


def _formats(args):
    return {f.strip() for f in args.format.split(",") if f.strip()}


def _outpath(args, name):
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


def _load(args):
    graph = load_graph(args.graph)
    problems = validate_graph(graph)
    if problems:
        for diag in problems:
            print(f"error: {diag}", file=sys.stderr)
        raise GraphSpecError(f"{args.graph}: {len(problems)} structural problem(s)")
    return graph


def _cmd_spectrum(args):
    from . import report
    from .spectrum import find_eigenvalues, partition

    graph = _load(args)
    eigs = find_eigenvalues(graph, args.kmax, mode=args.mode, tol=args.tol,
                            epsilon=args.epsilon)
    part = partition(graph, eigs)
    kinds = _formats(args)
    if "csv" in kinds:
        path = _outpath(args, "eigenvalues.csv")
        report.eigenvalues_csv(path, eigs, part)
        print(f"wrote {path}")
    if "json" in kinds:
        path = _outpath(args, "partition.json")
        report.partition_json(path, part)
        print(f"wrote {path}")
    if "svg" in kinds:
        path = _outpath(args, "spectrum.svg")
        report.spectrum_figure(part, path)
        print(f"wrote {path}")
    print(f"eigenvalues: {eigs.count} with lambda <= {eigs.level ** 2:.6g} "
          f"(level {eigs.level:.6g}, {eigs.n_negative} negative, "
          f"{eigs.m_zero} at zero)")
    if part.disorder_flag:
        print("note: negative/zero eigenvalues overflow the mu = 0 slots; "
              "the low pairing is bookkeeping only")
    return 0


def _cmd_trace(args):
    from . import report
    from .trace import convergence_report

    graph = _load(args)
    rep = convergence_report(graph, args.kmax, n_levels=args.levels,
                             mode=args.mode, tol=args.tol,
                             epsilon=args.epsilon,
                             with_contour=args.contour,
                             quad_tol=args.quad_tol)
    kinds = _formats(args)
    if "csv" in kinds:
        path = _outpath(args, "trace_terms.csv")
        report.trace_terms_csv(path, rep.terms)
        print(f"wrote {path}")
    if "json" in kinds:
        path = _outpath(args, "trace_summary.json")
        report.trace_summary_json(path, rep)
        print(f"wrote {path}")
    if "svg" in kinds:
        path = _outpath(args, "convergence.svg")
        report.convergence_figure(rep, path)
        print(f"wrote {path}")
    print(f"rhs {rep.rhs:.12g}; final partial sum {rep.partial_sums[-1]:.12g} "
          f"at level {rep.levels[-1]:.6g} (error {rep.final_error:.3e})")
    if args.contour:
        print(f"contour value {rep.contour_value:.12g} "
              f"(delta vs partial sum {rep.contour_delta:.3e})")
    return 0


def _cmd_asymptotics(args):
    from . import report
    from .spectrum import find_eigenvalues, partition
    from .trace import asymptotic_rows

    graph = _load(args)
    eigs = find_eigenvalues(graph, args.kmax, mode=args.mode, tol=args.tol,
                            epsilon=args.epsilon)
    part = partition(graph, eigs)
    rows = asymptotic_rows(graph, part, n_min=args.n_min)
    kinds = _formats(args)
    if "csv" in kinds:
        path = _outpath(args, "asymptotics.csv")
        report.asymptotics_csv(path, rows)
        print(f"wrote {path}")
    if "svg" in kinds:
        path = _outpath(args, "asymptotics.svg")
        report.asymptotics_figure(rows, path)
        print(f"wrote {path}")
    if rows:
        worst = max(abs(r["defect"]) * (r["mu"] ** 2) for r in rows)
        print(f"{len(rows)} comparisons; max |defect| * mu^2 = {worst:.6g}")
    else:
        print("no slots above n_min; raise --kmax")
    return 0


def _cmd_verify(args):
    from . import report
    from .contour import rouche_verify
    from .spectrum import allowed_level

    graph = _load(args)
    level = allowed_level(graph, args.kmax, args.epsilon)
    res = rouche_verify(graph, None, level, mode=args.mode, tol=args.tol,
                        count_tol=args.count_tol)
    if "json" in _formats(args):
        path = _outpath(args, "verify.json")
        report.write_json(path, {
            "level": res.level,
            "zeros_phi": res.zeros_phi,
            "zeros_product": res.zeros_product,
            "equal": res.equal,
        })
        print(f"wrote {path}")
    print(f"winding count {res.zeros_phi} vs product count {res.zeros_product} "
          f"at level {res.level:.6g}: {'ok' if res.equal else 'MISMATCH'}")
    return 0 if res.equal else 4


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qgtrace",
        description="Spectra and regularized trace identities for Schrodinger "
                    "operators on compact metric graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="locate, count, and pair eigenvalues")
    _add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("trace", help="regularized trace convergence study")
    _add_common(p)
    p.add_argument("--levels", type=int, default=6,
                   help="number of partial-sum levels (default 6)")
    p.add_argument("--contour", action="store_true",
                   help="add the independent contour evaluation")
    p.add_argument("--quad-tol", type=float, default=1e-8,
                   help="absolute tolerance of the contour integral")
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("asymptotics",
                       help="compare subsequences with their predictions")
    _add_common(p)
    p.add_argument("--n-min", type=int, default=1,
                   help="first index to compare (default 1)")
    p.set_defaults(func=_cmd_asymptotics)

    p = sub.add_parser("verify", help="winding count against the product count")
    _add_common(p)
    p.add_argument("--count-tol", type=float, default=0.02,
                   help="tolerance of the winding integral (default 0.02)")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        return args.func(args)
    except GraphSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QGraphError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
