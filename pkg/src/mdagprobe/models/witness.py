"""Distinguishing datasets for non-dominated mDAG pairs and their structural certificates.

A witness is built on the dominated-side mDAG ``h`` and shown unreachable for
``g`` by one of two sound structural arguments on the full split of ``g``:

* intervention independence: if ``a♯`` is not an ancestor of ``b♭``, the law of
  ``b♭`` ignores ``a♯``, so
  ``Q(a=v, b=x | do(rest=y)) <= Q(b=x | do(rest=y, a=w))`` for all ``v, w, x``;
* common cause: ♭ variables that are perfectly correlated (and not constant)
  given fixed ♯ values need a common latent ancestor.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Any

from ..graph import GraphError, Mdag, Pdag
from ..order import structurally_dominates
from ..reduction import canonical_pdag, latent_name
from ..swig import flat, sharp, split
from .reconstruct import MissingPatternError, reconstruct_marginal
from .simulate import (
    ONE,
    ZERO,
    Mechanism,
    ModelError,
    Params,
    Pattern,
    ProbeDataset,
    Table,
    dataset_from_patterns,
)

FEASIBLE = "feasible-with-params"
INFEASIBLE_DCONNECTION = "infeasible-dconnection"
INFEASIBLE_COMMON_ANCESTOR = "infeasible-common-ancestor"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class Verdict:
    status: str
    certificate: Any = None

    @property
    def infeasible(self) -> bool:
        return self.status in (INFEASIBLE_DCONNECTION, INFEASIBLE_COMMON_ANCESTOR)


@dataclass(frozen=True)
class DominanceCertificate:
    """Inclusion lists proving ``g`` structurally dominates ``h``."""

    edges: tuple[tuple[str, str], ...]
    faces: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class Witness:
    """Dataset realised by ``h`` with ``params`` and certified unreachable for ``g``."""

    kind: str
    dataset: ProbeDataset
    verdict: Verdict
    params: Params
    h_pdag: Pdag
    target: tuple[str, ...]
    mediaries: tuple[str, ...] = field(default=())


def _constant_mechanisms(g: Pdag, cards) -> dict[str, Mechanism]:
    mechs = {}
    for node in g.names:
        if g.kinds[node] == "input":
            continue
        width = 1
        for p in g.parents(node):
            width *= cards[p]
        mechs[node] = Mechanism.constant(0, g.parents(node), width)
    return mechs


def _copy_response(parents: Sequence[str], source: str) -> list[int]:
    """Binary response table that returns the value of ``source``."""
    k = list(parents).index(source)
    n = len(parents)
    return [(conf >> (n - 1 - k)) & 1 for conf in range(1 << n)]


def _point(variables, value_of) -> Table:
    variables = tuple(variables)
    return Table(variables, (2,) * len(variables), {tuple(value_of(v) for v in variables): ONE})


def copy_construction(m: Mdag, S: Iterable[str], p: Fraction | int | str = Fraction(1, 2)) -> tuple[Params, ProbeDataset]:
    """Members of ``S`` copy one binary latent common cause with ``P(latent=0) = p``.

    Every other node is constant 0.  The dataset holds the observational table
    and, for each ``T ⊆ S``, the table of ``X_T`` with all other nodes forced to 0.
    """
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ModelError(f"p={p} is not a probability")
    S = [n for n in m.nodes if n in set(S)]
    if not S or not m.complex.is_face(S):
        raise ModelError(f"{sorted(S)} is not a face of the mDAG")
    g = canonical_pdag(m)
    cards = dict.fromkeys(g.names, 2)
    mechs = _constant_mechanisms(g, cards)
    host = next(f for f in m.facets if set(S) <= set(f))
    if len(host) > 1:
        source = latent_name(host, m.nodes)
        mechs[source] = Mechanism((), [[0], [1]], [p, 1 - p])
        for s in S:
            pa = g.parents(s)
            mechs[s] = Mechanism(pa, [_copy_response(pa, source)], [ONE])
    else:
        (s,) = S
        pa = g.parents(s)
        width = 1 << len(pa)
        mechs[s] = Mechanism(pa, [[0] * width, [1] * width], [p, 1 - p])
    par = Params(mechs, cards)

    patterns = []
    keys = [tuple(m.nodes)] + [T for r in range(len(S), -1, -1) for T in combinations(S, r)]
    seen = set()
    for T in keys:
        forced = tuple(n for n in m.nodes if n not in T)
        if forced in seen:
            continue
        seen.add(forced)
        rest = [n for n in m.nodes if n in T]
        zeros = {n: 0 for n in rest}
        ones = {n: 1 if n in S else 0 for n in rest}
        probs = {}
        if p:
            probs[tuple(zeros[n] for n in rest)] = p
        if 1 - p:
            key = tuple(ones[n] for n in rest)
            probs[key] = probs.get(key, ZERO) + 1 - p
        patterns.append(Pattern(forced, (0,) * len(forced), Table(rest, (2,) * len(rest), probs)))
    return par, ProbeDataset(m.nodes, dict.fromkeys(m.nodes, 2), patterns)


def chain_construction(m: Mdag, edge: tuple[str, str], mediaries: Iterable[str] = ()) -> tuple[Params, ProbeDataset]:
    """``a`` is a fair coin, ``b`` copies ``a`` along the edge, everything else is constant 0.

    Patterns: observation, ``do(a=0)``, everything but ``b`` forced to 0, and
    everything but ``a, b`` forced to 0.  With all mediaries pinned at 0,
    ``P(b | M, do(a=0))`` is a point mass while ``P(b | M)`` is uniform.
    """
    a, b = edge
    if (a, b) not in m.directed:
        raise ModelError(f"edge {a}->{b} is not in the mDAG")
    g = canonical_pdag(m)
    cards = dict.fromkeys(g.names, 2)
    mechs = _constant_mechanisms(g, cards)
    pa = g.parents(a)
    width = 1 << len(pa)
    mechs[a] = Mechanism(pa, [[0] * width, [1] * width], [Fraction(1, 2), Fraction(1, 2)])
    pb = g.parents(b)
    mechs[b] = Mechanism(pb, [_copy_response(pb, a)], [ONE])
    par = Params(mechs, cards)

    nodes = m.nodes
    others = [n for n in nodes if n not in (a, b)]
    half = Fraction(1, 2)

    def coin(rest):
        probs = {}
        for v in (0, 1):
            probs[tuple(v if n in (a, b) else 0 for n in rest)] = half
        return Table(rest, (2,) * len(rest), probs)

    candidates = [
        ((), coin(nodes)),
        ((a,), _point([n for n in nodes if n != a], lambda n: 0)),
        (tuple(n for n in nodes if n != b), _point([b], lambda n: 0)),
        (tuple(others), coin([n for n in nodes if n in (a, b)])),
    ]
    patterns, seen = [], set()
    for forced, table in candidates:
        forced = tuple(n for n in nodes if n in forced)
        if forced not in seen:
            seen.add(forced)
            patterns.append(Pattern(forced, (0,) * len(forced), table))
    return par, ProbeDataset(nodes, dict.fromkeys(nodes, 2), patterns)


def conditional_contrast(ds: ProbeDataset, a: str, b: str, mediaries: Iterable[str] = ()) -> tuple[Fraction, Fraction]:
    """``(P(b=0 | M=0), P(b=0 | M=0, do(a=0)))`` read from the dataset."""
    mediaries = list(mediaries)

    def cond(table: Table) -> Fraction:
        m_idx = [table.variables.index(x) for x in mediaries]
        b_idx = table.variables.index(b)
        den = num = ZERO
        for key, q in table.probs.items():
            if all(key[i] == 0 for i in m_idx):
                den += q
                if key[b_idx] == 0:
                    num += q
        return num / den if den else ZERO

    return cond(ds.lookup({})), cond(ds.lookup({a: 0}))


def verify_realization(g: Pdag, par: Params, ds: ProbeDataset) -> Verdict:
    """``feasible-with-params`` iff forward simulation regenerates every pattern exactly."""
    regenerated = dataset_from_patterns(g, par, [pat.key for pat in ds.patterns])
    if regenerated == ds:
        return Verdict(FEASIBLE, par)
    return Verdict(UNDECIDED, None)


def _dconnection_violation(s: Pdag, ds: ProbeDataset):
    nodes = ds.nodes
    for a, b in ((a, b) for a in nodes for b in nodes if a != b):
        if sharp(a) in s.ancestors(flat(b)):
            continue
        for pat in ds.patterns:
            if set(pat.do) != set(nodes) - {a, b}:
                continue
            y = dict(zip(pat.do, pat.values))
            table = pat.table
            ia, ib = table.variables.index(a), table.variables.index(b)
            for w in range(ds.cards[a]):
                other = ds.lookup({**y, a: w})
                if other is None:
                    continue
                for key, q in table.probs.items():
                    bound = other[(key[ib],)]
                    if q > bound:
                        return {
                            "source": a,
                            "target": b,
                            "forced": y,
                            "values": {a: key[ia], b: key[ib]},
                            "alternative": w,
                            "joint": q,
                            "bound": bound,
                        }
    return None


def _common_ancestor_violation(s: Pdag, ds: ProbeDataset):
    nodes = ds.nodes
    if any(ds.cards[n] != 2 for n in nodes):
        return None
    values = sorted(ds.do_values_used | {0})
    for r in range(len(nodes), 1, -1):
        for S in combinations(nodes, r):
            shared = set.intersection(*({flat(v)} | s.ancestors(flat(v)) for v in S))
            if any(s.kinds[n] == "latent" for n in shared):
                continue
            for y in product(values, repeat=len(nodes)):
                ymap = dict(zip(nodes, y))
                try:
                    dist = reconstruct_marginal(ds, S, ymap)
                except MissingPatternError:
                    continue
                lo, hi = dist[(0,) * r], dist[(1,) * r]
                if lo > 0 and hi > 0 and lo + hi == 1:
                    return {"nodes": list(S), "sharp": ymap, "p": lo}
    return None


def certify_infeasible(g: Pdag, ds: ProbeDataset) -> Verdict:
    """Look for a structural reason ``g`` cannot jointly realise ``ds``."""
    if tuple(g.visible) != tuple(ds.nodes):
        raise ModelError(f"dataset nodes {ds.nodes} do not match graph visible nodes {g.visible}")
    s = split(g)
    found = _dconnection_violation(s, ds)
    if found:
        return Verdict(INFEASIBLE_DCONNECTION, found)
    found = _common_ancestor_violation(s, ds)
    if found:
        return Verdict(INFEASIBLE_COMMON_ANCESTOR, found)
    return Verdict(UNDECIDED, None)


def visible_mediaries(m: Mdag, a: str, b: str) -> tuple[str, ...]:
    """Nodes on a directed path from ``a`` to ``b`` in ``m``'s directed part."""
    g = canonical_pdag(m)
    down = g.descendants(a)
    up = g.ancestors(b)
    return tuple(n for n in m.nodes if n in down and n in up)


def dominance_witness(g: Mdag, h: Mdag, p: Fraction = Fraction(1, 2)):
    """Certificate if ``g`` dominates ``h``; otherwise a witness realised by ``h`` and refuted for ``g``."""
    if g.nodes != h.nodes:
        raise GraphError(f"node mismatch: {g.nodes} vs {h.nodes}")
    if structurally_dominates(g, h):
        pos = h.position
        faces = sorted((tuple(n for n in h.nodes if n in f) for f in h.faces), key=lambda f: (len(f), [pos[n] for n in f]))
        return DominanceCertificate(tuple(h.sorted_edges()), tuple(faces))

    missing_edges = [e for e in h.sorted_edges() if e not in g.directed]
    if missing_edges:
        a, b = missing_edges[0]
        mediaries = visible_mediaries(g, a, b)
        par, ds = chain_construction(h, (a, b), mediaries)
        kind, target = "chain", (a, b)
    else:
        facet = next(f for f in h.facets if frozenset(f) not in g.faces)
        par, ds = copy_construction(h, facet, p)
        kind, target, mediaries = "copy", tuple(facet), ()
    verdict = certify_infeasible(canonical_pdag(g), ds)
    return Witness(kind, ds, verdict, par, canonical_pdag(h), target, mediaries)
