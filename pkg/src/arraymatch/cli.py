"""Command-line entry point: ``arraymatch gen|match|flatten|oracle|report``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import reduction
from .generators import gen_random, gen_wire
from .graph import GraphError, flatten
from .io import GraphFormatError, dumps_graph, dumps_json, load_graph
from .matching import MatchingError
from .oracle import OracleCapError, hopcroft_karp, optimal_omega
from .report import quality_rows, run_pipeline, summarise_ratios, wire_rows, write_report

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCOMPLETE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is reserved for incomplete matchings
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _emit(text: str, path: str | None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _read_clauses(path: str, or_form: bool):
    try:
        clauses = reduction.parse_clauses(Path(path).read_text())
    except reduction.ClauseFormatError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    return reduction.expand_or_clauses(clauses) if or_form else clauses


def cmd_gen(args) -> int:
    if args.kind == "wire":
        g = gen_wire(args.n)
    elif args.kind == "random":
        g = gen_random(args.seed, args.eq_nodes, args.var_nodes, args.max_size, args.density,
                       max_dim=args.max_dim)
    else:
        clauses = _read_clauses(args.clauses, args.or_form)
        g, rmap = reduction.encode_max2sat(clauses)
        if rmap.renamed:
            names = ", ".join(f"{k} -> {v}" for k, v in rmap.renamed.items())
            print(f"renamed negated first occurrences: {names}", file=sys.stderr)
        if args.map:
            Path(args.map).write_text(dumps_json(rmap.to_json()))
    _emit(dumps_graph(g), args.out)
    return EXIT_OK


def cmd_match(args) -> int:
    if args.simplify_only and args.no_simplify:
        raise UsageError("--simplify-only and --no-simplify are mutually exclusive")
    g = load_graph(args.input)
    settings = {
        "simplify": not args.no_simplify,
        "match": not args.simplify_only,
        "seed": args.seed,
        "maxIterations": args.max_iterations,
    }
    rep = run_pipeline(g, do_simplify=not args.no_simplify, do_match=not args.simplify_only,
                       max_iterations=args.max_iterations, with_oracle=args.oracle,
                       timings=args.timings, settings=settings)
    if args.out:
        Path(args.out).write_text(dumps_graph(g))
    text = dumps_json(rep.to_json()) if args.format == "json" else rep.to_text()
    _emit(text, args.report)
    return EXIT_OK if rep.complete else EXIT_INCOMPLETE


def cmd_flatten(args) -> int:
    g = load_graph(args.input)
    sg = flatten(g)
    if args.format == "json":
        _emit(dumps_json(sg.to_json()), args.out)
    else:
        lines = [f"{len(sg.equations)} scalar equations, {len(sg.variables)} scalar variables, "
                 f"{len(sg.arcs)} arcs"]
        for e, v in sorted(sg.arcs):
            (en, ei), (vn, vi) = sg.equations[e], sg.variables[v]
            mark = " *" if sg.matching.get(e) == v else ""
            lines.append(f"{en}{list(ei)} -- {vn}{list(vi)}{mark}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = load_graph(args.input)
    if args.kind == "hk":
        sg = hopcroft_karp(flatten(g))
        out = {"cardinality": len(sg.matching), "scalarEquations": len(sg.equations),
               "scalarVariables": len(sg.variables)}
    else:
        res = optimal_omega(g, args.cap)
        out = {"feasible": res.feasible, "omegaOptimal": res.omega,
               "arcs": [list(a) for a in res.arcs]}
        if args.clauses and res.feasible:
            clauses = _read_clauses(args.clauses, args.or_form)
            enc, rmap = reduction.encode_max2sat(clauses)
            if sorted(enc.arcs) != sorted(g.arcs):
                raise UsageError("the clause file does not encode the given graph")
            assignment = reduction.decode_assignment(res.witness, rmap)
            out["assignment"] = assignment
            out["satisfied"] = reduction.count_satisfied(clauses, assignment)
            out["clauses"] = len(clauses)
    if args.format == "json":
        _emit(dumps_json(out), args.out)
    else:
        _emit("".join(f"{k}: {json.dumps(v)}\n" for k, v in out.items()), args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    sizes = [n for n in (10, 100, 1_000, 10_000, 100_000, 1_000_000) if n <= args.wire_max]
    wire = wire_rows(sizes)
    quality = quality_rows(args.count, args.seed)
    files = write_report(args.out_dir, wire, quality)
    stats = summarise_ratios(quality)
    out = {"files": [p.name for p in files], "omegaRatio": stats,
           "wireRatio": [r["omega"] / 3 for r in wire]}
    if args.format == "json":
        sys.stdout.write(dumps_json(out))
    else:
        sys.stdout.write(f"wrote {', '.join(out['files'])} to {args.out_dir}\n")
        sys.stdout.write(f"omega ratio over {stats['instances']} instances: "
                         f"mean={stats['mean']} max={stats['max']}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="arraymatch", description="Array-aware equation/variable matching.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp):
        sp.add_argument("--format", choices=("json", "text"), default="json")

    gen = sub.add_parser("gen", help="generate a graph")
    gsub = gen.add_subparsers(dest="kind", required=True)
    w = gsub.add_parser("wire", help="discretised heat-conducting wire")
    w.add_argument("--n", type=int, required=True)
    r = gsub.add_parser("random", help="seeded random graph")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--eq-nodes", type=int, default=4)
    r.add_argument("--var-nodes", type=int, default=4)
    r.add_argument("--max-size", type=int, default=4)
    r.add_argument("--max-dim", type=int, default=1)
    r.add_argument("--density", type=float, default=0.6)
    s = gsub.add_parser("max2sat", help="encode a clause list")
    s.add_argument("--clauses", required=True, help="one clause per line, '!' negates")
    s.add_argument("--or", dest="or_form", action="store_true",
                   help="read clauses as OR pairs and expand them first")
    s.add_argument("--map", help="also write the reduction map here")
    for sp in (w, r, s):
        sp.add_argument("--out", help="output file (default stdout)")
        sp.set_defaults(func=cmd_gen)

    m = sub.add_parser("match", help="simplify and match a graph")
    m.add_argument("input")
    m.add_argument("--out", help="write the matched graph here")
    m.add_argument("--report", help="write the report here (default stdout)")
    m.add_argument("--simplify-only", action="store_true")
    m.add_argument("--no-simplify", action="store_true")
    m.add_argument("--seed", type=int, default=0, help="recorded in the report; matching is deterministic")
    m.add_argument("--max-iterations", type=int)
    m.add_argument("--timings", action="store_true", help="include wall-clock timings (not reproducible)")
    m.add_argument("--oracle", action="store_true", help="add Hopcroft-Karp and optimal Omega")
    fmt(m)
    m.set_defaults(func=cmd_match)

    f = sub.add_parser("flatten", help="expand to the scalar graph")
    f.add_argument("input")
    f.add_argument("--out")
    fmt(f)
    f.set_defaults(func=cmd_flatten)

    o = sub.add_parser("oracle", help="scalar ground truth")
    o.add_argument("kind", choices=("hk", "omega"))
    o.add_argument("input")
    o.add_argument("--cap", type=int, default=24, help="scalar equation cap for omega")
    o.add_argument("--clauses", help="clause file the graph was generated from; decodes the witness")
    o.add_argument("--or", dest="or_form", action="store_true")
    o.add_argument("--out")
    fmt(o)
    o.set_defaults(func=cmd_oracle)

    rp = sub.add_parser("report", help="wire scaling and Omega quality tables and figures")
    rp.add_argument("--out-dir", required=True)
    rp.add_argument("--count", type=int, default=500, help="random corpus size")
    rp.add_argument("--seed", type=int, default=0)
    rp.add_argument("--wire-max", type=int, default=1_000_000)
    fmt(rp)
    rp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, GraphFormatError, GraphError, OracleCapError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except MatchingError as exc:
        print(f"matching failed: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
