"""Command-line interface.

    tautilt <file> info|enumerate|verify|fan|graph [options]

Exit codes: 0 success, 1 input error, 2 enumeration truncated,
3 theorem-violation detected by `verify`.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import linalg
from .algebra import AlgebraError, parse_algebra
from .modules import direct_sum, ext1_dim, injective, projective
from .stability import (
    b_plus,
    fac_contains,
    self_extension_witness,
    slate_for_node,
    verify_pair,
)
from .tautilting import (
    c_matrix,
    enumerate_exchange_graph,
    g_matrix,
    pair_to_json_dict,
    positive_c_vectors,
)
from .wallchamber import build_fan, emit_dot, emit_fan_json, emit_svg_stereographic

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_TRUNCATED = 2
EXIT_VIOLATION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are input errors (exit 1)
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def _build_parser() -> _Parser:
    p = _Parser(prog="tautilt",
                description="Exact tau-tilting pairs, c-vectors, bricks and "
                            "wall-and-chamber output for bound quiver algebras.")
    p.add_argument("file", help="algebra file")
    p.add_argument("command", choices=["info", "enumerate", "verify", "fan", "graph"])
    p.add_argument("--format", choices=["json", "table", "dot", "svg"], default=None,
                   help="output format (defaults per command)")
    p.add_argument("--max-nodes", type=int, default=10000)
    p.add_argument("--max-dim", type=int, default=30)
    p.add_argument("--prime", type=int, default=2,
                   help="prime for the brute-force stability oracle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None, help="write to file instead of stdout")
    return p


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _probes_for(graph, min_count: int = 8):
    """Probe modules: every registry indecomposable, padded with direct sums."""
    base = list(graph.registry.reps)
    probes = list(base)
    if base:
        i = 0
        while len(probes) < min_count:
            a = base[i % len(base)]
            b = base[(i // len(base)) % len(base)]
            probes.append(direct_sum(graph.algebra, [a, b]))
            i += 1
    return probes


def _fmt_matrix(m) -> str:
    return ";".join(",".join(str(x) for x in row) for row in linalg.as_int_matrix(m))


def _fmt_vecs(vecs) -> str:
    return " ".join("(" + ",".join(str(x) for x in v) + ")" for v in vecs) or "-"


def cmd_info(q, args) -> int:
    lines = [f"algebra {q.fingerprint()}",
             f"vertices {q.n}",
             f"dim {q.dimension}",
             "path basis: " + " ".join(q.path_str(p) for p in q.path_basis)]
    for i in range(1, q.n + 1):
        lines.append(f"P({i}) dims {projective(q, i).dim_label()}")
    for i in range(1, q.n + 1):
        lines.append(f"I({i}) dims {injective(q, i).dim_label()}")
    if args.format == "json":
        payload = {
            "fingerprint": q.fingerprint(),
            "vertices": q.n,
            "dim": q.dimension,
            "path_basis": [q.path_str(p) for p in q.path_basis],
            "projective_dims": {i: list(projective(q, i).dims) for i in range(1, q.n + 1)},
            "injective_dims": {i: list(injective(q, i).dims) for i in range(1, q.n + 1)},
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.output)
    else:
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_enumerate(q, args) -> int:
    graph = enumerate_exchange_graph(q, args.max_nodes, args.max_dim, args.seed)
    if args.format == "json":
        payload = {
            "algebra": q.fingerprint(),
            "complete": graph.complete,
            "n": q.n,
            "pairs": [dict(pair_to_json_dict(pair), id=i, pair=pair.descriptor())
                      for i, pair in enumerate(graph.nodes)],
            "edges": [{"src": e.src, "dst": e.dst, "slot": e.slot,
                       "c_vector": list(e.c_vector)} for e in graph.edges],
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.output)
    else:
        lines = [f"# {len(graph.nodes)} pairs, complete={graph.complete}",
                 "pair\tG\tC\tpositive_c_vectors\tB_plus\ttorsion_generators"]
        for i, pair in enumerate(graph.nodes):
            if graph.complete:
                slate = slate_for_node(graph, i, seed=args.seed)
                plus_str = _fmt_vecs([b.dims for b in b_plus(slate)])
                gens = [rep for rep in graph.registry.reps if fac_contains(pair, rep)]
                gens_str = _fmt_vecs([g.dims for g in gens])
            else:
                plus_str = gens_str = "?"  # bricks need both completions per slot
            lines.append("\t".join([
                pair.descriptor(),
                _fmt_matrix(g_matrix(pair)),
                _fmt_matrix(c_matrix(pair)),
                _fmt_vecs(positive_c_vectors(pair)),
                plus_str,
                gens_str,
            ]))
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if graph.complete else EXIT_TRUNCATED


def cmd_verify(q, args) -> int:
    graph = enumerate_exchange_graph(q, args.max_nodes, args.max_dim, args.seed)
    if not graph.complete:
        _emit(json.dumps({"error": "graph truncated; cannot verify"},
                         sort_keys=True) + "\n", args.output)
        return EXIT_TRUNCATED
    bricks = {}
    for i in range(len(graph.nodes)):  # registers every brick before probing
        slate = slate_for_node(graph, i, seed=args.seed)
        for b in slate.bricks:
            bricks[graph.registry.id_of(b)] = b
    probes = _probes_for(graph)
    reports = [verify_pair(pair, graph, probes, prime=args.prime, seed=args.seed)
               for pair in graph.nodes]
    brick_reports = []
    for bid in sorted(bricks):
        b = bricks[bid]
        witness = self_extension_witness(b, graph.registry.reps, seed=args.seed)
        brick_reports.append({
            "dim_vector": list(b.dims),
            "ext1_self_dim": ext1_dim(b, b),
            "self_extension_witness": list(witness.dims) if witness is not None else None,
        })
    all_pass = all(r["pass"] for r in reports)
    payload = {
        "algebra": q.fingerprint(),
        "nodes": len(graph.nodes),
        "all_pass": all_pass,
        "reports": reports,
        "bricks": brick_reports,
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.output)
    return EXIT_OK if all_pass else EXIT_VIOLATION


def cmd_fan(q, args) -> int:
    graph = enumerate_exchange_graph(q, args.max_nodes, args.max_dim, args.seed)
    fan = build_fan(graph, prime=args.prime, seed=args.seed)
    fmt = args.format or "json"
    if fmt == "svg":
        if q.n != 3:
            sys.stderr.write("error: SVG emission needs a rank-3 algebra\n")
            return EXIT_INPUT
        _emit(emit_svg_stereographic(fan), args.output)
    else:
        _emit(emit_fan_json(fan), args.output)
    return EXIT_OK if graph.complete else EXIT_TRUNCATED


def cmd_graph(q, args) -> int:
    graph = enumerate_exchange_graph(q, args.max_nodes, args.max_dim, args.seed)
    _emit(emit_dot(graph, seed=args.seed), args.output)
    return EXIT_OK if graph.complete else EXIT_TRUNCATED


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.max_nodes < 1 or args.max_dim < 1:
        sys.stderr.write("error: limits must be positive\n")
        return EXIT_INPUT
    if not _is_prime(args.prime):
        sys.stderr.write(f"error: {args.prime} is not prime\n")
        return EXIT_INPUT
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        sys.stderr.write(f"error: cannot read {args.file}: {exc}\n")
        return EXIT_INPUT
    try:
        q = parse_algebra(text)
    except AlgebraError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    handler = {"info": cmd_info, "enumerate": cmd_enumerate, "verify": cmd_verify,
               "fan": cmd_fan, "graph": cmd_graph}[args.command]
    return handler(q, args)


if __name__ == "__main__":
    sys.exit(main())
