"""``mdag-probe`` command line.

Exit status is 0 on success, 1 on a domain error (a JSON error record goes to
stderr) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import io
from .dsep import DsepQuery, d_separated
from .graph import GraphError, Mdag, Pdag
from .models import (
    DominanceCertificate,
    ModelError,
    do_pattern_shadow,
    dominance_witness,
    full_conditional,
    generate_all_patterns,
    random_params,
    reconstruct_binary,
    uniform_cards,
)
from .order import dominance_count, enumerate_mdags, hasse, structurally_dominates, to_dot
from .reduction import canonical_pdag, lnodes_to_faces, re_reduce
from .swig import check_commutation, from_ascii, split, split_subset


class DomainError(Exception):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from None


def _read_graph(path: str):
    return io.graph_from_json(_read_json(path))


def _read_pdag(path: str) -> Pdag:
    g = _read_graph(path)
    if not isinstance(g, Pdag):
        raise DomainError(f"{path} holds an mDAG; a pDAG is required")
    return g


def _read_mdag(path: str) -> Mdag:
    g = _read_graph(path)
    return g if isinstance(g, Mdag) else lnodes_to_faces(g)


def _names(text: str | None) -> list[str]:
    return [from_ascii(s.strip()) for s in text.split(",") if s.strip()] if text else []


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_graph(args, g) -> None:
    _emit(args, to_dot(g) if args.format == "dot" else io.dumps(io.graph_to_json(g)))


def cmd_enumerate(args):
    t0 = time.perf_counter()
    cat = enumerate_mdags(args.n)
    if args.catalog:
        with open(args.catalog, "w", encoding="utf-8") as fh:
            for i, m in enumerate(cat):
                record = {"index": i, "island": cat.split_index(i)[0], **io.mdag_to_json(m)}
                fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
    result = {"n": args.n, "directed": cat.n_directed, "complexes": cat.n_complexes, "mdags": len(cat)}
    if args.dominance:
        result["dominating_pairs"] = dominance_count(cat)
    if args.timing:
        result["seconds"] = round(time.perf_counter() - t0, 3)
    if args.counts:
        _emit(args, json.dumps(result if args.dominance or args.timing else {k: result[k] for k in ("directed", "complexes", "mdags")}) + "\n")
    else:
        _emit(args, io.dumps(result))


def cmd_reduce(args):
    g, trace = re_reduce(_read_pdag(args.infile))
    if args.trace:
        _emit(args, io.dumps({"graph": io.pdag_to_json(g), "trace": trace.to_json()}))
    else:
        _emit_graph(args, g)


def cmd_to_mdag(args):
    _emit_graph(args, lnodes_to_faces(_read_pdag(args.infile)))


def cmd_canonical(args):
    g = _read_graph(args.infile)
    if not isinstance(g, Mdag):
        raise DomainError("canonical needs an mDAG")
    _emit_graph(args, canonical_pdag(g))


def cmd_split(args):
    g = _read_graph(args.infile)
    if args.subset is not None:
        if isinstance(g, Mdag):
            raise DomainError("--subset applies to pDAGs only")
        _emit_graph(args, split_subset(g, _names(args.subset)))
    else:
        _emit_graph(args, split(g))


def cmd_dominates(args):
    g, h = _read_mdag(args.g), _read_mdag(args.h)
    _emit(args, io.dumps({"dominates": structurally_dominates(g, h)}))


def cmd_hasse(args):
    cat = enumerate_mdags(args.n)
    diagram = hasse(cat)
    if args.format == "dot":
        _emit(args, to_dot(diagram, style=args.style))
    else:
        payload = {
            "n": args.n,
            "elements": [{"index": i, **io.mdag_to_json(cat[i])} for i in diagram.elements],
            "covers": [{"lower": lo, "upper": hi} for lo, hi in sorted(diagram.covers)],
        }
        _emit(args, io.dumps(payload))


def _load_params(args, g):
    if args.params:
        return io.params_from_json(_read_json(args.params))
    return random_params(g, uniform_cards(g, args.card), args.seed)


def cmd_simulate(args):
    g = _read_pdag(args.graph)
    par = _load_params(args, g)
    ds = generate_all_patterns(g, par, one_do=args.one_do)
    _emit(args, io.dumps(io.dataset_to_json(ds)))


def cmd_full_conditional(args):
    g = _read_pdag(args.graph)
    par = _load_params(args, g)
    _emit(args, io.dumps(io.fc_to_json(full_conditional(g, par))))


def cmd_params(args):
    g = _read_pdag(args.graph)
    _emit(args, io.dumps(io.params_to_json(random_params(g, uniform_cards(g, args.card), args.seed))))


def cmd_shadow(args):
    fc = io.fc_from_json(_read_json(args.fc))
    do = _names(args.do)
    values = [int(v) for v in args.values.split(",") if v.strip()] if args.values else []
    if len(do) != len(values):
        raise DomainError("--do and --values must have the same length")
    table = do_pattern_shadow(fc, do, values)
    _emit(args, io.dumps({"do": do, "values": dict(zip(do, values)), "variables": list(table.variables), "table": io.table_to_json(table)}))


def cmd_reconstruct(args):
    ds = io.dataset_from_json(_read_json(args.dataset))
    _emit(args, io.dumps(io.fc_to_json(reconstruct_binary(ds))))


def cmd_witness(args):
    g, h = _read_mdag(args.g), _read_mdag(args.h)
    w = dominance_witness(g, h)
    if isinstance(w, DominanceCertificate):
        payload = {"dominates": True, "edges": [list(e) for e in w.edges], "faces": [list(f) for f in w.faces]}
    else:
        payload = {
            "dominates": False,
            "construction": w.kind,
            "target": list(w.target),
            "mediaries": list(w.mediaries),
            "dataset": io.dataset_to_json(w.dataset),
            "verdict_g": io.verdict_to_json(w.verdict),
            "params_h": io.params_to_json(w.params),
            "h_pdag": io.pdag_to_json(w.h_pdag),
        }
    _emit(args, io.dumps(io.jsonable(payload)))


def cmd_dsep(args):
    g = _read_pdag(args.infile)
    q = DsepQuery(_names(args.a), _names(args.b), _names(args.c))
    _emit(args, io.dumps({"A": sorted(q.A), "B": sorted(q.B), "C": sorted(q.C), "d_separated": d_separated(g, q)}))


def cmd_commute_check(args):
    _emit(args, io.dumps({"commutes": check_commutation(_read_pdag(args.infile))}))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdag-probe", description="pDAG/mDAG structure calculus toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, graph_format=False):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--out", default="-", help="output path (default: stdout)")
        if graph_format:
            p.add_argument("--format", choices=("json", "dot"), default="json")
        return p

    p = add("enumerate", cmd_enumerate, "enumerate mDAGs on n ordered nodes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--counts", action="store_true", help="print only the three counts")
    p.add_argument("--catalog", metavar="FILE", help="write the catalog as JSON lines")
    p.add_argument("--dominance", action="store_true", help="also sweep all ordered pairs for dominance")
    p.add_argument("--timing", action="store_true")

    for name, func, text in (
        ("reduce", cmd_reduce, "RE-reduce a pDAG"),
        ("to-mdag", cmd_to_mdag, "map a pDAG to its mDAG"),
        ("canonical", cmd_canonical, "canonical pDAG of an mDAG"),
        ("commute-check", cmd_commute_check, "check that split and mDAG reduction commute"),
    ):
        p = add(name, func, text, graph_format=name != "commute-check")
        p.add_argument("--in", dest="infile", required=True)
        if name == "reduce":
            p.add_argument("--trace", action="store_true", help="include the rewrite trace")

    p = add("split", cmd_split, "split nodes into natural and intervention copies", graph_format=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--subset", help="comma-separated visible nodes (default: all)")

    p = add("dominates", cmd_dominates, "structural dominance of g over h")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)

    p = add("hasse", cmd_hasse, "Hasse diagram of the structural order")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("json", "dot"), default="dot")
    p.add_argument("--style", choices=("default", "detail"), default="default")

    for name, func, text in (
        ("simulate", cmd_simulate, "simulate every do-pattern of a model"),
        ("full-conditional", cmd_full_conditional, "exact P(flat | sharp) of a model"),
        ("params", cmd_params, "draw random parameters for a pDAG"),
    ):
        p = add(name, func, text)
        p.add_argument("--graph", required=True)
        if name != "params":
            p.add_argument("--params", help="parameter JSON (default: random, see --seed)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--card", type=int, default=2, help="cardinality for random parameters")
        if name == "simulate":
            p.add_argument("--one-do", action="store_true", help="force only the value 0")

    p = add("shadow", cmd_shadow, "do-pattern shadow of a full conditional")
    p.add_argument("--fc", required=True)
    p.add_argument("--do", default="")
    p.add_argument("--values", default="")

    p = add("reconstruct", cmd_reconstruct, "rebuild a binary full conditional from all-patterns data")
    p.add_argument("--dataset", required=True)

    p = add("witness", cmd_witness, "distinguishing witness for h against g")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)

    p = add("dsep", cmd_dsep, "d-separation query")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c", default="")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (DomainError, GraphError, ModelError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(msg)}, sort_keys=True, ensure_ascii=False) + "\n")
        return 1
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
