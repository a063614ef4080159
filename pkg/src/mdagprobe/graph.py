"""Immutable pDAG / mDAG value types and the simplicial complexes they carry.

Node ids are plain strings.  The declaration order of the visible nodes is the
temporal order; every rewrite returns a fresh value.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Union

VISIBLE = "visible"
LATENT = "latent"
INPUT = "input"
KINDS = (VISIBLE, LATENT, INPUT)

Edge = tuple[str, str]


class GraphError(ValueError):
    """Raised when a graph or complex violates its invariants."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def _check_node_id(name) -> str | None:
    if not isinstance(name, str) or not name:
        return f"invalid node id {name!r}: must be a non-empty string"
    if any(ch.isspace() for ch in name):
        return f"invalid node id {name!r}: contains whitespace"
    return None


def _parse_edge(edge) -> Edge:
    if isinstance(edge, str):
        parent, sep, child = edge.partition("->")
        if not sep:
            raise GraphError(f"cannot parse edge {edge!r}; expected 'a->b'")
        return parent.strip(), child.strip()
    parent, child = edge
    return parent, child


def _topological(names: Iterable[str], edges: Iterable[Edge]) -> list[str] | None:
    """Kahn's algorithm, ties broken by declaration order.  None on a cycle."""
    names = list(names)
    rank = {n: i for i, n in enumerate(names)}
    indeg = dict.fromkeys(names, 0)
    children: dict[str, list[str]] = {n: [] for n in names}
    for p, c in edges:
        indeg[c] += 1
        children[p].append(c)
    ready = sorted((n for n in names if indeg[n] == 0), key=rank.__getitem__)
    out = []
    while ready:
        node = ready.pop(0)
        out.append(node)
        for c in children[node]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
        ready.sort(key=rank.__getitem__)
    return out if len(out) == len(names) else None


def _reach(start: str, adjacency: Mapping[str, Iterable[str]]) -> set[str]:
    seen: set[str] = set()
    stack = list(adjacency.get(start, ()))
    while stack:
        node = stack.pop()
        if node not in seen:
            seen.add(node)
            stack.extend(adjacency.get(node, ()))
    return seen


def _violations(nodes, edges, allow_input: bool) -> list[str]:
    problems: list[str] = []
    names: list[str] = []
    kinds: dict[str, str] = {}
    for name, kind in nodes:
        bad = _check_node_id(name)
        if bad:
            problems.append(bad)
            continue
        if name in kinds:
            problems.append(f"duplicate node id {name!r}")
            continue
        allowed = KINDS if allow_input else (VISIBLE, LATENT)
        if kind not in allowed:
            problems.append(f"node {name!r} has invalid kind {kind!r}")
        names.append(name)
        kinds[name] = kind

    good_edges = []
    for p, c in edges:
        if p not in kinds or c not in kinds:
            problems.append(f"edge {p}->{c} references an unknown node")
        elif p == c:
            problems.append(f"self-loop on {p!r}")
        else:
            good_edges.append((p, c))
    if problems:
        return problems

    if _topological(names, good_edges) is None:
        problems.append("cycle: graph is not acyclic")
        return problems

    for p, c in good_edges:
        if kinds[c] == INPUT:
            problems.append(f"input has parent: edge {p}->{c} points into input node {c!r}")

    # visible ancestry, including through latent mediaries, must follow declaration order
    observed = [n for n in names if kinds[n] != LATENT]
    pos = {n: i for i, n in enumerate(observed)}
    adjacency: dict[str, list[str]] = {}
    for p, c in good_edges:
        adjacency.setdefault(p, []).append(c)
    for a in observed:
        for d in _reach(a, adjacency):
            if d in pos and pos[d] < pos[a]:
                problems.append(f"temporal order: {a!r} is an ancestor of earlier node {d!r}")
    return problems


def _normalize_nodes(nodes) -> tuple[tuple[str, str], ...]:
    out = []
    for item in nodes:
        if isinstance(item, str):
            out.append((item, VISIBLE))
        else:
            name, kind = item
            out.append((name, kind))
    return tuple(out)


@dataclass(frozen=True)
class Pdag:
    """A DAG whose nodes are partitioned into visible and latent nodes.

    ``nodes`` is an ordered sequence of ``(id, kind)`` pairs; bare strings are
    taken to be visible.  ``edges`` accepts pairs or ``"a->b"`` strings.
    """

    nodes: tuple[tuple[str, str], ...]
    edges: frozenset[Edge]

    _allow_input = False

    def __init__(self, nodes, edges=()):
        object.__setattr__(self, "nodes", _normalize_nodes(nodes))
        object.__setattr__(self, "edges", frozenset(_parse_edge(e) for e in edges))
        problems = _violations(self.nodes, self.edges, self._allow_input)
        if problems:
            raise GraphError(problems)

    @classmethod
    def build(cls, visible=(), latent=(), edges=(), inputs=()):
        """Convenience constructor: visible nodes first (in temporal order), then latents."""
        nodes = [(v, VISIBLE) for v in visible] + [(i, INPUT) for i in inputs]
        nodes += [(u, LATENT) for u in latent]
        return cls(nodes, edges)

    def __repr__(self):
        spec = " ".join(n if k == VISIBLE else f"{n}:{k}" for n, k in self.nodes)
        arcs = " ".join(f"{p}->{c}" for p, c in self.sorted_edges())
        return f"{type(self).__name__}([{spec}] {arcs})"

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.nodes)

    @cached_property
    def kinds(self) -> dict[str, str]:
        return dict(self.nodes)

    @cached_property
    def position(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    def kind(self, node: str) -> str:
        return self.kinds[node]

    @cached_property
    def visible(self) -> tuple[str, ...]:
        return tuple(n for n, k in self.nodes if k == VISIBLE)

    @cached_property
    def latent(self) -> tuple[str, ...]:
        return tuple(n for n, k in self.nodes if k == LATENT)

    @cached_property
    def inputs(self) -> tuple[str, ...]:
        return tuple(n for n, k in self.nodes if k == INPUT)

    @cached_property
    def _parents(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {n: [] for n in self.names}
        for p, c in self.edges:
            out[c].append(p)
        return {n: tuple(sorted(ps, key=self.position.__getitem__)) for n, ps in out.items()}

    @cached_property
    def _children(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {n: [] for n in self.names}
        for p, c in self.edges:
            out[p].append(c)
        return {n: tuple(sorted(cs, key=self.position.__getitem__)) for n, cs in out.items()}

    def parents(self, node: str) -> tuple[str, ...]:
        return self._parents[node]

    def children(self, node: str) -> tuple[str, ...]:
        return self._children[node]

    def is_exogenous(self, node: str) -> bool:
        return not self._parents[node]

    def ancestors(self, node: str) -> set[str]:
        """Strict ancestors of ``node``."""
        return _reach(node, self._parents)

    def descendants(self, node: str) -> set[str]:
        return _reach(node, self._children)

    @cached_property
    def topological_order(self) -> tuple[str, ...]:
        return tuple(_topological(self.names, self.edges))

    def sorted_edges(self) -> list[Edge]:
        pos = self.position
        return sorted(self.edges, key=lambda e: (pos[e[0]], pos[e[1]]))

    def replace(self, nodes=None, edges=None):
        """Return a new graph of the same type with the given parts swapped in."""
        return type(self)(self.nodes if nodes is None else nodes, self.edges if edges is None else edges)


class ThreePdag(Pdag):
    """A pDAG that may also carry parentless input nodes."""

    _allow_input = True


def validate(graph, *, allow_input: bool | None = None) -> ValidationReport:
    """Check a graph against the pDAG / 3-pDAG invariants.

    ``graph`` may be a constructed :class:`Pdag` or a raw description: a mapping
    in the JSON layout (``{"nodes": [{"id", "kind"}], "edges": [[p, c]]}``) or
    a ``(nodes, edges)`` pair.
    """
    if isinstance(graph, Pdag):
        nodes, edges = graph.nodes, graph.edges
        if allow_input is None:
            allow_input = isinstance(graph, ThreePdag)
    elif isinstance(graph, Mapping):
        nodes = [(n["id"], n.get("kind", VISIBLE)) if isinstance(n, Mapping) else n for n in graph["nodes"]]
        edges = graph.get("edges", ())
    else:
        nodes, edges = graph
    if allow_input is None:
        allow_input = True
    try:
        nodes = _normalize_nodes(nodes)
        edges = [_parse_edge(e) for e in edges]
    except (GraphError, TypeError, ValueError) as exc:
        return ValidationReport((f"malformed graph description: {exc}",))
    return ValidationReport(tuple(_violations(nodes, edges, allow_input)))


def is_temporally_consistent(graph: Pdag, order) -> bool:
    """True iff every visible-to-visible ancestry relation follows ``order``.

    Ancestry through latent mediaries counts.
    """
    order = list(order)
    if sorted(order) != sorted(graph.visible) or len(set(order)) != len(order):
        raise GraphError(f"order {order} is not a permutation of the visible nodes {list(graph.visible)}")
    pos = {n: i for i, n in enumerate(order)}
    for a in order:
        for d in graph.descendants(a):
            if d in pos and pos[d] < pos[a]:
                return False
    return True


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed family of non-empty node subsets, stored by its facets.

    The empty set is never a face.  ``ground`` keeps the caller's node order,
    which is also the order of members inside each stored facet.
    """

    ground: tuple[str, ...]
    facets: tuple[tuple[str, ...], ...]

    def __init__(self, ground, facets=()):
        ground = tuple(ground)
        if len(set(ground)) != len(ground):
            raise GraphError("duplicate elements in complex ground set")
        pos = {n: i for i, n in enumerate(ground)}
        sets = []
        for facet in facets:
            members = frozenset(facet)
            stray = members - pos.keys()
            if stray:
                raise GraphError(f"facet {sorted(facet)} mentions nodes outside ground: {sorted(stray)}")
            if members:
                sets.append(members)
        covered = set().union(*sets) if sets else set()
        sets.extend(frozenset([n]) for n in ground if n not in covered)
        maximal = {s for s in sets if not any(s < t for t in sets)}
        ordered = sorted((tuple(sorted(s, key=pos.__getitem__)) for s in maximal), key=lambda f: [pos[n] for n in f])
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "facets", tuple(ordered))

    def __repr__(self):
        return "SimplicialComplex(" + " ".join("{" + ",".join(f) + "}" for f in self.facets) + ")"

    @cached_property
    def faces(self) -> frozenset[frozenset[str]]:
        out: set[frozenset[str]] = set()
        for facet in self.facets:
            for r in range(1, len(facet) + 1):
                out.update(frozenset(c) for c in combinations(facet, r))
        return frozenset(out)

    def is_face(self, subset) -> bool:
        subset = frozenset(subset)
        return bool(subset) and any(subset <= frozenset(f) for f in self.facets)

    def nontrivial_facets(self) -> tuple[tuple[str, ...], ...]:
        return tuple(f for f in self.facets if len(f) > 1)

    def face_mask(self, order=None) -> int:
        """Bitmask with bit ``s`` set for every face whose member mask is ``s``."""
        pos = {n: i for i, n in enumerate(order or self.ground)}
        mask = 0
        for face in self.faces:
            s = 0
            for n in face:
                s |= 1 << pos[n]
            mask |= 1 << s
        return mask


def closure(facets, ground) -> SimplicialComplex:
    """Downward closure of ``facets`` over ``ground``, with singleton completion."""
    return SimplicialComplex(ground, facets)


@dataclass(frozen=True)
class Mdag:
    """Directed structure plus simplicial complex over ordered visible nodes."""

    nodes: tuple[str, ...]
    directed: frozenset[Edge]
    complex: SimplicialComplex

    def __init__(self, nodes, directed=(), facets=()):
        nodes = tuple(nodes)
        for n in nodes:
            bad = _check_node_id(n)
            if bad:
                raise GraphError(bad)
        directed = frozenset(_parse_edge(e) for e in directed)
        if isinstance(facets, SimplicialComplex):
            cx = facets if facets.ground == nodes else SimplicialComplex(nodes, facets.facets)
        else:
            cx = SimplicialComplex(nodes, facets)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "directed", directed)
        object.__setattr__(self, "complex", cx)
        problems = _violations(self._kinded_nodes(), directed, allow_input=True)
        problems += self._extra_violations()
        if problems:
            raise GraphError(problems)

    def _kinded_nodes(self):
        return [(n, VISIBLE) for n in self.nodes]

    def _extra_violations(self) -> list[str]:
        return []

    def __repr__(self):
        arcs = " ".join(f"{p}->{c}" for p, c in self.sorted_edges())
        return f"{type(self).__name__}([{' '.join(self.nodes)}] {arcs} {self.complex!r})"

    @cached_property
    def position(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    @property
    def facets(self) -> tuple[tuple[str, ...], ...]:
        return self.complex.facets

    @property
    def faces(self) -> frozenset[frozenset[str]]:
        return self.complex.faces

    def sorted_edges(self) -> list[Edge]:
        pos = self.position
        return sorted(self.directed, key=lambda e: (pos[e[0]], pos[e[1]]))

    @property
    def is_confounder_free(self) -> bool:
        return not self.complex.nontrivial_facets()

    @property
    def is_directed_edge_free(self) -> bool:
        return not self.directed


@dataclass(frozen=True, init=False, repr=False)
class ThreeMdag(Mdag):
    """An mDAG whose nodes may include input nodes."""

    inputs: frozenset[str] = field(default=frozenset())

    def __init__(self, nodes, directed=(), facets=(), inputs=()):
        object.__setattr__(self, "inputs", frozenset(inputs))
        super().__init__(nodes, directed, facets)

    def _kinded_nodes(self):
        return [(n, INPUT if n in self.inputs else VISIBLE) for n in self.nodes]

    def _extra_violations(self) -> list[str]:
        problems = [f"unknown input node {i!r}" for i in sorted(self.inputs - set(self.nodes))]
        for facet in self.complex.nontrivial_facets():
            for n in facet:
                if n in self.inputs:
                    problems.append(f"input node {n!r} occurs in non-singleton facet {list(facet)}")
        return problems

    @property
    def visible(self) -> tuple[str, ...]:
        return tuple(n for n in self.nodes if n not in self.inputs)


AnyPdag = Union[Pdag, ThreePdag]
AnyMdag = Union[Mdag, ThreeMdag]
