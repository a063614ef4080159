"""Exhaustive mDAG enumeration over a fixed temporal order, structural dominance and Hasse diagrams.

Every mDAG on ``n`` ordered nodes is a pair (directed structure, complex).  A
directed structure is a bitmask over the forward pairs ``i < j``; a complex is
a bitmask over the ``2^n - 1`` non-empty node subsets (bit ``s - 1`` for the
subset with member mask ``s``).  Dominance is then two subset tests.
"""

from __future__ import annotations

import os
import string
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .graph import INPUT, LATENT, GraphError, Mdag, Pdag, SimplicialComplex, ThreeMdag


def default_order(n: int) -> tuple[str, ...]:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n <= 26:
        return tuple(string.ascii_lowercase[:n])
    return tuple(f"v{i}" for i in range(n))


def _resolve_order(n: int, order) -> tuple[str, ...]:
    if order is None:
        return default_order(n)
    order = tuple(order)
    if len(order) != n or len(set(order)) != n:
        raise ValueError(f"order {order} is not a sequence of {n} distinct names")
    return order


def forward_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def enumerate_directed(n: int, order: Sequence[str] | None = None) -> list[frozenset[tuple[str, str]]]:
    """All order-consistent edge sets; index ``k`` holds the edges whose bits are set in ``k``."""
    order = _resolve_order(n, order)
    pairs = [(order[i], order[j]) for i, j in forward_pairs(n)]
    return [frozenset(e for b, e in enumerate(pairs) if k >> b & 1) for k in range(1 << len(pairs))]


def _nonsingleton_subsets(n: int) -> list[int]:
    """Subset masks with at least two members, by size then lexicographic rank."""
    out = []
    for r in range(2, n + 1):
        out.extend(sum(1 << i for i in c) for c in combinations(range(n), r))
    return out


def enumerate_complex_masks(n: int) -> list[int]:
    """Face bitmasks of every complex on ``n`` nodes.

    Subsets are decided one at a time, smallest first; a subset may be added
    only once all its one-smaller subsets are faces, which keeps every partial
    choice downward closed.  Exclusion is tried before inclusion.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    singles = sum(1 << ((1 << i) - 1) for i in range(n))
    subsets = _nonsingleton_subsets(n)
    shrink = {s: [s & ~(1 << i) for i in range(n) if s >> i & 1] for s in subsets}
    out: list[int] = []

    def extend(k: int, mask: int) -> None:
        if k == len(subsets):
            out.append(mask)
            return
        s = subsets[k]
        extend(k + 1, mask)
        if all(mask >> (t - 1) & 1 for t in shrink[s]):
            extend(k + 1, mask | 1 << (s - 1))

    extend(0, singles)
    return out


def complex_from_mask(mask: int, order: Sequence[str]) -> SimplicialComplex:
    n = len(order)
    faces = [s for s in range(1, 1 << n) if mask >> (s - 1) & 1]
    return SimplicialComplex(order, [[order[i] for i in range(n) if s >> i & 1] for s in faces])


def complex_mask(cx: SimplicialComplex, order: Sequence[str]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    mask = 0
    for face in cx.faces:
        mask |= 1 << (sum(1 << pos[v] for v in face) - 1)
    return mask


def directed_mask(edges, order: Sequence[str]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    bit = {p: b for b, p in enumerate(forward_pairs(len(order)))}
    mask = 0
    for p, c in edges:
        i, j = pos[p], pos[c]
        if (i, j) not in bit:
            raise GraphError(f"edge {p}->{c} runs against the order")
        mask |= 1 << bit[i, j]
    return mask


def enumerate_complexes(n: int, order: Sequence[str] | None = None) -> list[SimplicialComplex]:
    order = _resolve_order(n, order)
    return [complex_from_mask(m, order) for m in enumerate_complex_masks(n)]


def structurally_dominates(g: Mdag, h: Mdag) -> bool:
    """Edge inclusion and face inclusion (faces, not facets)."""
    if g.nodes != h.nodes:
        raise GraphError(f"node mismatch: {g.nodes} vs {h.nodes}")
    if isinstance(g, ThreeMdag) or isinstance(h, ThreeMdag):
        gi = g.inputs if isinstance(g, ThreeMdag) else frozenset()
        hi = h.inputs if isinstance(h, ThreeMdag) else frozenset()
        if gi != hi:
            raise GraphError("input node sets differ")
    return h.directed <= g.directed and h.faces <= g.faces


@dataclass(frozen=True)
class MdagCatalog:
    """All mDAGs on ``order``; entry ``c * D + d`` pairs complex ``c`` with directed structure ``d``."""

    order: tuple[str, ...]
    directed_masks: tuple[int, ...]
    complex_masks: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def n_directed(self) -> int:
        return len(self.directed_masks)

    @property
    def n_complexes(self) -> int:
        return len(self.complex_masks)

    def __len__(self) -> int:
        return self.n_directed * self.n_complexes

    def split_index(self, i: int) -> tuple[int, int]:
        """``(complex index, directed index)`` of entry ``i``."""
        return divmod(i, self.n_directed)

    @cached_property
    def islands(self) -> tuple[range, ...]:
        d = self.n_directed
        return tuple(range(c * d, (c + 1) * d) for c in range(self.n_complexes))

    @cached_property
    def _pairs(self) -> list[tuple[str, str]]:
        return [(self.order[i], self.order[j]) for i, j in forward_pairs(self.n)]

    def __getitem__(self, i: int) -> Mdag:
        if not 0 <= i < len(self):
            raise IndexError(i)
        cache = self.__dict__.setdefault("_entries", {})
        if i not in cache:
            c, d = self.split_index(i)
            edges = [e for b, e in enumerate(self._pairs) if self.directed_masks[d] >> b & 1]
            cache[i] = Mdag(self.order, edges, complex_from_mask(self.complex_masks[c], self.order))
        return cache[i]

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def index_of(self, m: Mdag) -> int:
        if m.nodes != self.order:
            raise GraphError("mDAG nodes differ from the catalog order")
        c = self._complex_rank[complex_mask(m.complex, self.order)]
        d = directed_mask(m.directed, self.order)
        return c * self.n_directed + d

    @cached_property
    def _complex_rank(self) -> dict[int, int]:
        return {m: k for k, m in enumerate(self.complex_masks)}

    @cached_property
    def keys(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-entry directed and complex bitmasks as unsigned arrays."""
        d = np.array(self.directed_masks, dtype=np.uint64)
        c = np.array(self.complex_masks, dtype=np.uint64)
        return np.tile(d, self.n_complexes), np.repeat(c, self.n_directed)


def enumerate_mdags(n: int, order: Sequence[str] | None = None) -> MdagCatalog:
    order = _resolve_order(n, order)
    if n > 5:
        raise ValueError("enumeration beyond five nodes is not supported")
    return MdagCatalog(order, tuple(range(1 << len(forward_pairs(n)))), tuple(enumerate_complex_masks(n)))


def _worker_count() -> int:
    raw = os.environ.get("MDAG_PROBE_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _dominance_rows(dk, ck, lo, hi) -> np.ndarray:
    # row i, column j: entry i dominates entry j
    d_fail = dk[None, :] & ~dk[lo:hi, None]
    c_fail = ck[None, :] & ~ck[lo:hi, None]
    return (d_fail == 0) & (c_fail == 0)


def dominance_matrix(catalog: MdagCatalog, chunk: int = 512) -> np.ndarray:
    """Boolean matrix ``D[i, j]``: entry ``i`` structurally dominates entry ``j``."""
    dk, ck = catalog.keys
    n = len(catalog)
    out = np.empty((n, n), dtype=bool)
    bounds = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]

    def fill(b):
        lo, hi = b
        out[lo:hi] = _dominance_rows(dk, ck, lo, hi)

    with ThreadPoolExecutor(_worker_count()) as pool:
        list(pool.map(fill, bounds))
    return out


def dominance_count(catalog: MdagCatalog, chunk: int = 512) -> int:
    """Number of ordered dominating pairs, swept without materialising the matrix."""
    dk, ck = catalog.keys
    n = len(catalog)
    bounds = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
    with ThreadPoolExecutor(_worker_count()) as pool:
        return int(sum(pool.map(lambda b: int(_dominance_rows(dk, ck, *b).sum()), bounds)))


@dataclass(frozen=True)
class HasseDiagram:
    elements: tuple[int, ...]
    covers: frozenset[tuple[int, int]]
    catalog: MdagCatalog | None = None

    def upper_sets(self) -> dict[int, set[int]]:
        up: dict[int, set[int]] = {e: set() for e in self.elements}
        for lo, hi in self.covers:
            up[lo].add(hi)
        return up


def _covers_of_masks(masks: Sequence[int]) -> list[tuple[int, int]]:
    """Cover pairs ``(lower, upper)`` among bitmask-encoded downsets: one element apart."""
    rank = {m: k for k, m in enumerate(masks)}
    out = []
    for k, m in enumerate(masks):
        bits = m
        while bits:
            low = bits & -bits
            bits ^= low
            below = rank.get(m ^ low)
            if below is not None:
                out.append((below, k))
    return out


def hasse(catalog: MdagCatalog) -> HasseDiagram:
    """Covers of the product order: drop one edge inside an island, or step one face down between islands."""
    d = catalog.n_directed
    covers = set()
    d_covers = _covers_of_masks(catalog.directed_masks)
    c_covers = _covers_of_masks(catalog.complex_masks)
    for c in range(catalog.n_complexes):
        covers.update((c * d + lo, c * d + hi) for lo, hi in d_covers)
    for lo, hi in c_covers:
        covers.update((lo * d + k, hi * d + k) for k in range(d))
    return HasseDiagram(tuple(range(len(catalog))), frozenset(covers), catalog)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _mdag_body(m: Mdag, prefix: str = "") -> list[str]:
    from .swig import to_ascii

    def name(v):
        return prefix + to_ascii(v)

    inputs = m.inputs if isinstance(m, ThreeMdag) else frozenset()
    lines = []
    for v in m.nodes:
        shape = "square" if v in inputs else "circle"
        lines.append(f"  {_quote(name(v))} [label={_quote(to_ascii(v))}, shape={shape}, style=filled, fillcolor=white];")
    for p, c in m.sorted_edges():
        lines.append(f"  {_quote(name(p))} -> {_quote(name(c))};")
    for k, facet in enumerate(m.complex.nontrivial_facets()):
        junction = f"{prefix}facet{k}"
        lines.append(f"  {_quote(junction)} [shape=point, color=red, label=\"\"];")
        for v in facet:
            lines.append(f"  {_quote(junction)} -> {_quote(name(v))} [dir=none, color=red, style=bold];")
    return lines


def _mdag_label(m: Mdag) -> str:
    edges = " ".join(f"{p}{c}" for p, c in m.sorted_edges()) or "-"
    facets = " ".join("".join(f) for f in m.complex.nontrivial_facets()) or "-"
    return f"E: {edges} | F: {facets}"


def to_dot(x, style: str = "default") -> str:
    """DOT text for a pDAG, (3-)mDAG or Hasse diagram; deterministic for fixed input.

    ``style="detail"`` draws each Hasse element as a small graph cluster instead
    of a one-line label.
    """
    from .swig import to_ascii

    if isinstance(x, Pdag):
        lines = ["digraph pdag {"]
        for v, kind in x.nodes:
            if kind == LATENT:
                attrs = "shape=circle, style=filled, fillcolor=gray"
            elif kind == INPUT:
                attrs = "shape=square, style=filled, fillcolor=white"
            else:
                attrs = "shape=circle, style=filled, fillcolor=white"
            lines.append(f"  {_quote(to_ascii(v))} [{attrs}];")
        lines += [f"  {_quote(to_ascii(p))} -> {_quote(to_ascii(c))};" for p, c in x.sorted_edges()]
        return "\n".join(lines + ["}"]) + "\n"
    if isinstance(x, Mdag):
        return "\n".join(["digraph mdag {", *_mdag_body(x), "}"]) + "\n"
    if isinstance(x, HasseDiagram):
        lines = ["digraph hasse {", "  rankdir=TB;"]
        for e in x.elements:
            if x.catalog is not None and style == "detail":
                lines.append(f"  subgraph cluster_{e} {{")
                lines.append(f"    label={_quote(str(e))};")
                lines += ["  " + ln for ln in _mdag_body(x.catalog[e], prefix=f"m{e}_")]
                lines.append("  }")
            else:
                label = f"{e}: {_mdag_label(x.catalog[e])}" if x.catalog is not None else str(e)
                lines.append(f"  n{e} [shape=box, label={_quote(label)}];")
        for lo, hi in sorted(x.covers):
            if x.catalog is not None and style == "detail":
                a = f"m{hi}_{x.catalog.order[0]}"
                b = f"m{lo}_{x.catalog.order[0]}"
                lines.append(f"  {_quote(a)} -> {_quote(b)} [ltail=cluster_{hi}, lhead=cluster_{lo}];")
            else:
                lines.append(f"  n{hi} -> n{lo};")
        return "\n".join(lines + ["}"]) + "\n"
    raise TypeError(f"cannot render {type(x).__name__} as DOT")
