"""Command line entry point: ``tuttelimit <command> ...``.

Exit status is 0 on success, 1 when an identity or inequality is violated
and 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .bethe import limit_branch, t_d
from .exact_poly import as_rational, format_rational
from .experiments import (
    aggregate,
    bound_report,
    convergence_run,
    default_corpus,
    identity_suite,
    records_to_csv,
    records_to_json,
)
from .graph_core import GraphError, Multigraph, named_graph, read_edge_list
from .halfedge import HalfEdgeWeights, half_edge_closed_form, half_edge_partition, half_edge_polynomial
from .matching import matching_polynomial, matching_roots, r_polynomial, tree_like_walk_total
from .tutte import tutte_polynomial

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class _Output:
    def __init__(self, path: str | None, quiet: bool):
        self.path, self.quiet = path, quiet

    def emit(self, text: str) -> None:
        if not text.endswith("\n"):
            text += "\n"
        if self.path:
            Path(self.path).write_text(text)
        if not self.quiet and not self.path:
            sys.stdout.write(text)

    def info(self, text: str) -> None:
        if not self.quiet:
            print(text)


def _rational(s: str) -> Fraction:
    try:
        return Fraction(as_rational(s))
    except (TypeError, ValueError):
        try:
            return Fraction(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from None


def _int_list(s: str) -> list[int]:
    try:
        return [int(t) for t in s.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {s!r}") from None


def _grid(s: str) -> list[Fraction]:
    parts = s.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must look like a:b:step")
    a, b, step = (_rational(p) for p in parts)
    if step <= 0:
        raise argparse.ArgumentTypeError("grid step must be positive")
    out, x = [], a
    while x <= b:
        out.append(x)
        x += step
    return out


def _load_graph(args) -> Multigraph:
    if args.graph:
        return read_edge_list(args.graph)
    if args.named:
        return named_graph(args.named)
    raise GraphError("give a graph with --graph FILE or --named NAME")


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--graph", help="edge-list file ('n m' header, then 'u v' lines)")
    src.add_argument("--named", help="e.g. petersen, complete_k(4), cycle:5, star:3")


# --------------------------------------------------------------------------
# commands


def cmd_tutte(args, out: _Output) -> int:
    G = _load_graph(args)
    T = tutte_polynomial(G).polynomial
    doc: dict = {"n": G.n, "m": G.m}
    if args.full or not args.at:
        doc["coeffs"] = T.matrix()
        doc["polynomial"] = T.render()
    doc["evaluations"] = {
        f"{format_rational(x)},{format_rational(y)}": format_rational(T(x, y)) for x, y in (args.at or [])
    }
    out.emit(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_matching(args, out: _Output) -> int:
    G = _load_graph(args)
    lines = []
    show_all = not (args.mu or args.r_poly or args.roots or args.walks is not None)
    if args.mu or show_all:
        lines.append(f"mu: {matching_polynomial(G).poly.render()}")
    if args.r_poly or show_all:
        lines.append(f"R: {r_polynomial(G).render()}")
    if args.roots:
        lines.append("roots: " + " ".join(f"{r:.12g}" for r in matching_roots(G)))
    if args.walks is not None:
        lines.append(f"tree-like walks (length {args.walks}): {tree_like_walk_total(G, args.walks)}")
    out.emit("\n".join(lines))
    return EXIT_OK


def cmd_halfedge(args, out: _Output) -> int:
    G = _load_graph(args)
    lines = []
    status = EXIT_OK
    if args.weights:
        w = HalfEdgeWeights(*args.weights)
        brute = half_edge_partition(G, w)
        lines.append(f"M: {format_rational(brute)}")
        if w.a0 != 0:
            closed = half_edge_closed_form(G, w)
            lines.append(f"closed form: {format_rational(closed)}")
            if closed != brute:
                status = EXIT_VIOLATION
    if args.check_identity:
        M = half_edge_polynomial(G)
        R1 = r_polynomial(G).shift(1)
        ok = M == R1.mul_zpow(G.m - G.n) if G.m >= G.n else M.mul_zpow(G.n - G.m) == R1
        lines.append(f"M(z,1,-1): {M.render()}")
        lines.append(f"R(z+1): {R1.render()}")
        lines.append(f"identity: {'pass' if ok else 'FAIL'}")
        if not ok:
            status = EXIT_VIOLATION
    if not lines:
        lines.append(f"M(z,1,-1): {half_edge_polynomial(G).render()}")
    out.emit("\n".join(lines))
    return status


def cmd_limits(args, out: _Output) -> int:
    rows = ["d,x,t_d,branch"]
    for x in args.x_grid:
        rows.append(f"{args.d},{format_rational(x)},{t_d(args.d, float(x))!r},{limit_branch(args.d, float(x))}")
    out.emit("\n".join(rows))
    return EXIT_OK


def cmd_identity(args, out: _Output) -> int:
    if args.corpus == ["default"]:
        corpus = default_corpus()
    else:
        corpus = [(p, read_edge_list(p)) for p in args.corpus]
    report = identity_suite(corpus)
    lines = []
    for ident, counts in report.summary().items():
        lines.append(f"{ident}: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    for r in report.failures():
        lines.append(f"{r.status.upper()} {r.graph} {r.identity}: {r.detail}")
    lines.append("all identities hold" if report.ok else "identity violations found")
    out.emit("\n".join(lines))
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_bounds(args, out: _Output) -> int:
    G = _load_graph(args)
    rep = bound_report(G, args.z or [Fraction(1)], args.g, name=args.graph or args.named or "G")
    lines = [f"g={rep.g} L={rep.L}"]
    for e in rep.comparison:
        lines.append(f"z={format_rational(e.z)} {e.render()} {'ok' if e.ok else 'VIOLATED'}")
    for e in rep.fkg:
        lines.append(f"k={e.k} c_k={e.c_k} f_k={e.f_k} bound={format_rational(e.bound)} {'ok' if e.ok else 'VIOLATED'}")
    out.emit("\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_converge(args, out: _Output) -> int:
    recs = convergence_run(
        args.d, args.x, args.y, args.sizes, args.trials, args.seed,
        generator=args.generator, workers=args.workers,
    )
    rows = recs + aggregate(recs)
    if args.out and args.out.endswith(".json"):
        out.emit(records_to_json(rows))
    else:
        out.emit(records_to_csv(rows))
    if args.out:
        for r in aggregate(recs):
            out.info(f"n={r.n} mean root={r.root:.6f} target={r.target:.6f} mean gap={r.gap:.4f}")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write results to this file (.csv or .json)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="tuttelimit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tutte", parents=[common], help="exact Tutte polynomial")
    _add_graph_args(p)
    p.add_argument("--at", nargs=2, type=_rational, action="append", metavar=("X", "Y"))
    p.add_argument("--full", action="store_true", help="include the coefficient matrix")
    p.set_defaults(func=cmd_tutte)

    p = sub.add_parser("matching", parents=[common], help="matching polynomial, R_G, roots, walks")
    _add_graph_args(p)
    p.add_argument("--mu", action="store_true")
    p.add_argument("--r-poly", action="store_true")
    p.add_argument("--roots", action="store_true")
    p.add_argument("--walks", type=int, metavar="L")
    p.set_defaults(func=cmd_matching)

    p = sub.add_parser("halfedge", parents=[common], help="half-edge model")
    _add_graph_args(p)
    p.add_argument("--weights", nargs=3, type=_rational, metavar=("A0", "A1", "A2"))
    p.add_argument("--check-identity", action="store_true")
    p.set_defaults(func=cmd_halfedge)

    p = sub.add_parser("limits", parents=[common], help="tabulate t_d(x)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--x-grid", type=_grid, required=True, metavar="A:B:STEP")
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("identity", parents=[common], help="run the exact identity suite")
    p.add_argument("--corpus", nargs="+", default=["default"], help="'default' or edge-list files")
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("bounds", parents=[common], help="comparison and broken-cycle bound audits")
    _add_graph_args(p)
    p.add_argument("--z", type=_rational, action="append")
    p.add_argument("--g", type=int)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("converge", parents=[common], help="T(x,y)^(1/n) on random regular graphs")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--x", type=_rational, required=True)
    p.add_argument("--y", type=_rational, default=Fraction(1))
    p.add_argument("--sizes", type=_int_list, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--generator", choices=("random_regular", "cycle"), default="random_regular")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    out = _Output(args.out, args.quiet)
    try:
        return args.func(args, out)
    except (GraphError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
