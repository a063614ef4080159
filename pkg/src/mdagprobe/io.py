"""Canonical JSON encodings.

Rationals are ``"num/den"`` strings.  Split suffixes are written ``_flat`` and
``_sharp`` so every serialized id stays ASCII.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from .graph import INPUT, VISIBLE, GraphError, Mdag, Pdag, ThreeMdag, ThreePdag
from .models.simulate import FullConditional, Mechanism, Params, Pattern, ProbeDataset, Table
from .swig import from_ascii, to_ascii


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        raise GraphError(f"refusing inexact number {s}; write rationals as 'num/den'")
    return Fraction(str(s))


def _ids(names):
    return [to_ascii(n) for n in names]


def pdag_to_json(g: Pdag) -> dict:
    return {
        "nodes": [{"id": to_ascii(n), "kind": k} for n, k in g.nodes],
        "edges": [_ids(e) for e in g.sorted_edges()],
    }


def pdag_from_json(d: dict) -> Pdag:
    try:
        nodes = [(from_ascii(n["id"]), n.get("kind", VISIBLE)) for n in d["nodes"]]
        edges = [tuple(from_ascii(x) for x in e) for e in d.get("edges", [])]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed pDAG JSON: {exc}") from None
    cls = ThreePdag if any(k == INPUT for _, k in nodes) else Pdag
    return cls(nodes, edges)


def mdag_to_json(m: Mdag) -> dict:
    out = {
        "nodes": _ids(m.nodes),
        "edges": [_ids(e) for e in m.sorted_edges()],
        "facets": [_ids(f) for f in m.facets],
    }
    if isinstance(m, ThreeMdag):
        out["inputs"] = [to_ascii(n) for n in m.nodes if n in m.inputs]
    return out


def mdag_from_json(d: dict) -> Mdag:
    try:
        nodes = [from_ascii(n) for n in d["nodes"]]
        edges = [tuple(from_ascii(x) for x in e) for e in d.get("edges", [])]
        facets = [[from_ascii(x) for x in f] for f in d.get("facets", [])]
        inputs = [from_ascii(x) for x in d.get("inputs", [])]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed mDAG JSON: {exc}") from None
    if "inputs" in d:
        return ThreeMdag(nodes, edges, facets, inputs=inputs)
    return Mdag(nodes, edges, facets)


def graph_to_json(x) -> dict:
    return mdag_to_json(x) if isinstance(x, Mdag) else pdag_to_json(x)


def graph_from_json(d: dict):
    """pDAG if nodes are records with kinds, mDAG if nodes are bare ids."""
    nodes = d.get("nodes") if isinstance(d, dict) else None
    if not isinstance(nodes, list):
        raise GraphError("graph JSON needs a 'nodes' list")
    if nodes and all(isinstance(n, str) for n in nodes):
        return mdag_from_json(d)
    if "facets" in d and not nodes:
        return mdag_from_json(d)
    return pdag_from_json(d)


def _key(values) -> str:
    return ",".join(str(v) for v in values)


def _unkey(s: str) -> tuple[int, ...]:
    return tuple(int(v) for v in s.split(",")) if s else ()


def table_to_json(t: Table) -> dict:
    return {_key(k): frac(p) for k, p in t.probs.items()}


def dataset_to_json(ds: ProbeDataset) -> dict:
    return {
        "nodes": _ids(ds.nodes),
        "cards": {to_ascii(n): c for n, c in ds.cards.items()},
        "patterns": [
            {
                "do": _ids(p.do),
                "values": {to_ascii(a): v for a, v in zip(p.do, p.values)},
                "table": table_to_json(p.table),
            }
            for p in ds.patterns
        ],
    }


def dataset_from_json(d: dict) -> ProbeDataset:
    try:
        cards = {from_ascii(n): int(c) for n, c in d["cards"].items()}
        nodes = [from_ascii(n) for n in d["nodes"]] if "nodes" in d else list(cards)
        patterns = []
        for p in d["patterns"]:
            do = [from_ascii(a) for a in p["do"]]
            values = {from_ascii(a): int(v) for a, v in p.get("values", {}).items()}
            rest = [n for n in nodes if n not in set(do)]
            probs = {_unkey(k): parse_frac(v) for k, v in p["table"].items()}
            table = Table(rest, [cards[n] for n in rest], probs)
            patterns.append(Pattern(tuple(do), tuple(values[a] for a in do), table))
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed dataset JSON: {exc!r}") from None
    return ProbeDataset(nodes, cards, patterns)


INDEX_CONVENTION = "row-major over (sharp states..., flat states...), nodes in temporal order, sharp outer"


def fc_to_json(fc: FullConditional) -> dict:
    return {
        "nodes": _ids(fc.nodes),
        "cards": list(fc.cards),
        "index": INDEX_CONVENTION,
        "values": [frac(v) for v in fc.array.reshape(-1)],
    }


def fc_from_json(d: dict) -> FullConditional:
    try:
        nodes = tuple(from_ascii(n) for n in d["nodes"])
        cards = tuple(int(c) for c in d["cards"])
        values = [parse_frac(v) for v in d["values"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed full-conditional JSON: {exc!r}") from None
    shape = cards + cards
    arr = np.empty(len(values), dtype=object)
    arr[:] = values
    try:
        arr = arr.reshape(shape)
    except ValueError:
        raise GraphError(f"{len(values)} values do not fit shape {shape}") from None
    return FullConditional(nodes, cards, arr)


def params_to_json(par: Params) -> dict:
    return {
        "cards": {to_ascii(n): c for n, c in par.cards.items()},
        "mechanisms": {
            to_ascii(n): {
                "parents": _ids(m.parents),
                "responses": [list(r) for r in m.responses],
                "error": [frac(w) for w in m.error],
            }
            for n, m in par.mechanisms.items()
        },
    }


def params_from_json(d: dict) -> Params:
    try:
        cards = {from_ascii(n): int(c) for n, c in d["cards"].items()}
        mechs = {
            from_ascii(n): Mechanism([from_ascii(p) for p in m.get("parents", [])], m["responses"], [parse_frac(w) for w in m["error"]])
            for n, m in d["mechanisms"].items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed params JSON: {exc!r}") from None
    return Params(mechs, cards)


def jsonable(x):
    if isinstance(x, Fraction):
        return frac(x)
    if isinstance(x, dict):
        return {to_ascii(str(k)): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in x]
        return sorted(items) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, str):
        return to_ascii(x)
    return x


def verdict_to_json(v) -> dict:
    cert = v.certificate
    if isinstance(cert, Params):
        cert = params_to_json(cert)
    else:
        cert = jsonable(cert)
    return {"status": v.status, "certificate": cert}
