"""d-separation, exact conditional independence, and latent-free inequivalence witnesses."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .graph import GraphError, Pdag
from .swig import convert_i_to_v


@dataclass(frozen=True)
class DsepQuery:
    """Is ``A`` d-separated from ``B`` given ``C``?"""

    A: frozenset[str]
    B: frozenset[str]
    C: frozenset[str] = frozenset()

    def __init__(self, A: Iterable[str], B: Iterable[str], C: Iterable[str] = ()):
        A, B, C = frozenset(A), frozenset(B), frozenset(C)
        if A & B or A & C or B & C:
            raise GraphError("query sets must be pairwise disjoint")
        if not A or not B:
            raise GraphError("query sets A and B must be non-empty")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    def ordered(self, g: Pdag) -> tuple[list[str], list[str], list[str]]:
        pos = g.position
        return tuple(sorted(s, key=pos.__getitem__) for s in (self.A, self.B, self.C))


def d_separated(g: Pdag, q: DsepQuery) -> bool:
    """Reachability ("Bayes ball") test over the whole graph, latents included.

    Input nodes are treated as ordinary observed nodes.
    """
    if g.inputs:
        g = convert_i_to_v(g)
    for s in (q.A, q.B, q.C):
        unknown = s - set(g.names)
        if unknown:
            raise GraphError(f"query mentions unknown nodes {sorted(unknown)}")
        latent = [n for n in s if g.kinds[n] == "latent"]
        if latent:
            raise GraphError(f"query mentions latent nodes {sorted(latent)}")

    cond = q.C
    cond_or_anc = set(cond)
    for c in cond:
        cond_or_anc |= g.ancestors(c)

    # states: (node, arrived from a child / going up) or (node, arrived from a parent / going down)
    UP, DOWN = 0, 1
    stack = [(a, UP) for a in q.A]
    seen = set()
    while stack:
        node, direction = stack.pop()
        if (node, direction) in seen:
            continue
        seen.add((node, direction))
        if node in q.B and node not in cond:
            return False
        if direction == UP:
            if node not in cond:
                stack.extend((p, UP) for p in g.parents(node))
                stack.extend((c, DOWN) for c in g.children(node))
        else:
            if node not in cond:
                stack.extend((c, DOWN) for c in g.children(node))
            if node in cond_or_anc:
                stack.extend((p, UP) for p in g.parents(node))
    return True


def _scaled_array(dist, variables) -> np.ndarray:
    """Integer array proportional to ``dist`` (exact), laid out over ``variables``."""
    probs = dist.probs
    denom = lcm(*(Fraction(p).denominator for p in probs.values())) if probs else 1
    ints = {k: int(Fraction(p) * denom) for k, p in probs.items()}
    big = max(ints.values(), default=0) * denom > 2**62 or denom > 2**31
    arr = np.zeros(dist.cards, dtype=object if big else np.int64)
    for k, v in ints.items():
        arr[k] = v
    idx = [dist.variables.index(v) for v in variables]
    return arr.transpose(idx + [i for i in range(arr.ndim) if i not in idx])


def ci_holds(dist, A: Iterable[str], B: Iterable[str], C: Iterable[str] = ()) -> bool:
    """Exact test of ``X_A`` independent of ``X_B`` given ``X_C``.

    Checks ``n(a,b,c) n(c) = n(a,c) n(b,c)`` on integer-scaled counts; slices
    with ``n(c) = 0`` hold vacuously.
    """
    A, B, C = list(A), list(B), list(C)
    if set(A) & set(B) or set(A) & set(C) or set(B) & set(C):
        raise GraphError("sets must be pairwise disjoint")
    ordered = A + B + C
    arr = _scaled_array(dist, ordered)
    rest = tuple(range(len(ordered), arr.ndim))
    if rest:
        arr = arr.sum(axis=rest)
    na, nb = len(A), len(B)
    n_abc = arr
    n_bc = arr.sum(axis=tuple(range(na)), keepdims=True)
    n_ac = arr.sum(axis=tuple(range(na, na + nb)), keepdims=True)
    n_c = arr.sum(axis=tuple(range(na + nb)), keepdims=True)
    return bool(np.all(n_abc * n_c == n_ac * n_bc))


def latent_free_witness(g: Pdag, h: Pdag) -> DsepQuery:
    """Query with opposite d-separation verdicts on two distinct latent-free pDAGs.

    Takes the lexicographically first edge ``a_i -> a_j`` (by temporal index)
    present in exactly one graph and conditions on every other node preceding
    ``a_j``.
    """
    if g.latent or h.latent:
        raise GraphError("latent_free_witness needs latent-free graphs")
    if g.inputs or h.inputs:
        raise GraphError("latent_free_witness needs graphs without input nodes")
    if g.visible != h.visible:
        raise GraphError("graphs must share the same nodes in the same temporal order")
    if g.edges == h.edges:
        raise GraphError("graphs are identical")
    order = g.visible
    pos = {v: i for i, v in enumerate(order)}
    diff = sorted(g.edges ^ h.edges, key=lambda e: (pos[e[0]], pos[e[1]]))
    a, b = diff[0]
    q = DsepQuery({a}, {b}, {v for v in order[: pos[b]] if v != a})
    if d_separated(g, q) == d_separated(h, q):
        raise AssertionError(f"query {q} does not separate the graphs")
    return q


__all__ = ["DsepQuery", "ci_holds", "d_separated", "latent_free_witness"]
