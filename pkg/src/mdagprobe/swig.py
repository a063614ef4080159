"""Node splitting: single-world intervention graphs for pDAGs and mDAGs."""

from __future__ import annotations

from collections.abc import Iterable

from .graph import INPUT, LATENT, VISIBLE, GraphError, Mdag, Pdag, ThreeMdag, ThreePdag
from .reduction import lnodes_to_faces

FLAT = "♭"
SHARP = "♯"
ASCII_SUFFIX = {FLAT: "_flat", SHARP: "_sharp"}


def flat(v: str) -> str:
    """Natural-value copy of ``v``."""
    return v + FLAT


def sharp(v: str) -> str:
    """Intervention copy of ``v``."""
    return v + SHARP


def unsplit(name: str) -> tuple[str, str | None]:
    """Inverse of flat/sharp: ``("a", "♭")`` for ``"a♭"``, ``(name, None)`` otherwise."""
    for suffix in (FLAT, SHARP):
        if name.endswith(suffix):
            return name[: -len(suffix)], suffix
    return name, None


def to_ascii(name: str) -> str:
    base, suffix = unsplit(name)
    return base + ASCII_SUFFIX[suffix] if suffix else name


def from_ascii(name: str) -> str:
    for suffix, text in ASCII_SUFFIX.items():
        if name.endswith(text):
            return name[: -len(text)] + suffix
    return name


def split_subset(g: Pdag, subset: Iterable[str]) -> ThreePdag:
    """Split each node ``a`` of ``subset`` into a childless ``a♭`` and a parentless input ``a♯``.

    ``a♭`` keeps the parents of ``a``; ``a♯`` takes over its children.  Both
    sit at the position ``a`` held, ``a♭`` first.
    """
    subset = set(subset)
    for a in subset:
        kind = g.kinds.get(a)
        if kind is None:
            raise GraphError(f"cannot split unknown node {a!r}")
        if kind != VISIBLE:
            raise GraphError(f"cannot split {kind} node {a!r}")
    nodes = []
    for name, kind in g.nodes:
        if name in subset:
            nodes += [(flat(name), VISIBLE), (sharp(name), INPUT)]
        else:
            nodes.append((name, kind))
    edges = [(sharp(p) if p in subset else p, flat(c) if c in subset else c) for p, c in g.edges]
    return ThreePdag(nodes, edges)


def _split_mdag(m: Mdag) -> ThreeMdag:
    inputs = set(m.inputs) if isinstance(m, ThreeMdag) else set()
    split_nodes = [n for n in m.nodes if n not in inputs]
    nodes = []
    for n in m.nodes:
        nodes += [flat(n), sharp(n)] if n not in inputs else [n]
        if n not in inputs:
            inputs.add(sharp(n))

    def rename(n, role):
        return role(n) if n in split_nodes else n

    directed = [(rename(p, sharp), rename(c, flat)) for p, c in m.directed]
    facets = [[rename(n, flat) for n in f] for f in m.facets]
    return ThreeMdag(nodes, directed, facets, inputs=inputs)


def split(g):
    """Full split of every visible node (pDAG -> 3-pDAG, mDAG -> 3-mDAG)."""
    if isinstance(g, Mdag):
        return _split_mdag(g)
    return split_subset(g, g.visible)


def convert_i_to_v(s: Pdag) -> Pdag:
    """Re-kind input nodes as visible ones; edges and order are untouched."""
    return Pdag([(n, VISIBLE if k == INPUT else k) for n, k in s.nodes], s.edges)


def check_commutation(g: Pdag) -> bool:
    """True iff splitting and reducing to an mDAG give the same 3-mDAG in either order."""
    return split(lnodes_to_faces(g)) == lnodes_to_faces(split(g))


def is_split_shaped(s: Pdag) -> bool:
    """Every non-latent node is parentless or childless."""
    return all(not s.parents(n) or not s.children(n) for n, k in s.nodes if k != LATENT)
