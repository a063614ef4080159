"""Slow, independent reference implementations used to check the fast ones."""

from __future__ import annotations

from collections.abc import Iterable
from fractions import Fraction
from itertools import chain, combinations, product

from mdagprobe.graph import LATENT, Pdag


def topo(g: Pdag) -> list[str]:
    """Depth-first topological order, independent of the library's Kahn order."""
    out, seen = [], set()

    def visit(n):
        if n in seen:
            return
        seen.add(n)
        for p, c in g.edges:
            if c == n:
                visit(p)
        out.append(n)

    for n, _ in g.nodes:
        visit(n)
    return out


def _config(par, node, values):
    mech = par.mechanisms[node]
    idx = 0
    for p in mech.parents:
        idx = idx * par.cards[p] + values[p]
    return idx


def naive_joint(g: Pdag, par, do=None) -> dict[tuple[int, ...], Fraction]:
    """Enumerate every joint error assignment and push it through the response functions."""
    do = dict(do or {})
    free = [n for n in topo(g) if n not in do and g.kinds[n] != "input"]
    out_nodes = [v for v in g.visible if v not in do]
    out: dict[tuple[int, ...], Fraction] = {}
    error_ranges = [range(len(par.mechanisms[n].error)) for n in free]
    for errs in product(*error_ranges):
        w = Fraction(1)
        values = dict(do)
        for n, e in zip(free, errs):
            mech = par.mechanisms[n]
            w *= mech.error[e]
            if w == 0:
                break
            values[n] = mech.responses[e][_config(par, n, values)]
        if w == 0:
            continue
        key = tuple(values[v] for v in out_nodes)
        out[key] = out.get(key, Fraction(0)) + w
    return out


def naive_full_conditional(g: Pdag, par) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]:
    """P(flat | sharp) computed directly on the unsplit graph.

    Each visible node reads its visible parents from the sharp assignment and
    its latent parents from the sampled latent values.
    """
    vis = list(g.visible)
    order = topo(g)
    out = {}
    error_ranges = [range(len(par.mechanisms[n].error)) for n in order]
    for y in product(*(range(par.cards[v]) for v in vis)):
        sharp = dict(zip(vis, y))
        acc: dict[tuple[int, ...], Fraction] = {}
        for errs in product(*error_ranges):
            w = Fraction(1)
            natural = {}
            for n, e in zip(order, errs):
                mech = par.mechanisms[n]
                w *= mech.error[e]
                reads = {p: (natural[p] if g.kinds[p] == LATENT else sharp[p]) for p in mech.parents}
                natural[n] = mech.responses[e][_config(par, n, reads)]
            x = tuple(natural[v] for v in vis)
            acc[x] = acc.get(x, Fraction(0)) + w
        for x in product(*(range(par.cards[v]) for v in vis)):
            out[y, x] = acc.get(x, Fraction(0))
    return out


def undirected_paths(g: Pdag, a: str, b: str):
    adj = {n: set() for n in g.names}
    for p, c in g.edges:
        adj[p].add(c)
        adj[c].add(p)

    def walk(path):
        if path[-1] == b:
            yield list(path)
            return
        for nxt in sorted(adj[path[-1]]):
            if nxt not in path:
                yield from walk(path + [nxt])

    yield from walk([a])


def path_dseparated(g: Pdag, A: Iterable[str], B: Iterable[str], C: Iterable[str]) -> bool:
    """d-separation by listing every simple path and applying the blocking rules."""
    C = set(C)
    desc_or_self = {n: g.descendants(n) | {n} for n in g.names}
    edges = set(g.edges)
    for a in A:
        for b in B:
            for path in undirected_paths(g, a, b):
                open_path = True
                for k in range(1, len(path) - 1):
                    prev, mid, nxt = path[k - 1], path[k], path[k + 1]
                    collider = (prev, mid) in edges and (nxt, mid) in edges
                    if collider:
                        if not desc_or_self[mid] & C:
                            open_path = False
                    elif mid in C:
                        open_path = False
                    if not open_path:
                        break
                if open_path:
                    return False
    return True


def closed_form_exog(g: Pdag) -> frozenset[tuple[str, str]]:
    """Edges after exogenizing all latents, read off directly.

    ``x -> b`` survives iff ``b`` is not latent and some directed path from
    ``x`` to ``b`` has only latent intermediates.
    """
    out = set()
    for x in g.names:
        stack, seen = list(g.children(x)), set()
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            if g.kinds[node] == LATENT:
                stack.extend(g.children(node))
            else:
                out.add((x, node))
    return frozenset(out)


def all_downsets(n: int) -> list[frozenset[frozenset[int]]]:
    """Every family of non-singleton subsets of range(n) closed under non-singleton subsets."""
    subs = [frozenset(c) for r in range(2, n + 1) for c in combinations(range(n), r)]
    found = []
    for bits in product((0, 1), repeat=len(subs)):
        fam = {s for s, b in zip(subs, bits) if b}
        if all(frozenset(t) in fam for s in fam for t in combinations(s, len(s) - 1) if len(t) >= 2):
            found.append(frozenset(fam))
    return found


def transitive_reduction(n: int, rel) -> set[tuple[int, int]]:
    """Covers (lower, upper) of a partial order given as ``rel(i, j)``: i >= j."""
    covers = set()
    for hi in range(n):
        for lo in range(n):
            if hi == lo or not rel(hi, lo):
                continue
            if not any(k not in (hi, lo) and rel(hi, k) and rel(k, lo) for k in range(n)):
                covers.add((lo, hi))
    return covers


def transitive_closure(n: int, pairs) -> set[tuple[int, int]]:
    """Reflexive-transitive closure of (lower, upper) pairs, as (upper, lower) relation."""
    up = {i: set() for i in range(n)}
    for lo, hi in pairs:
        up[hi].add(lo)
    rel = set()
    for i in range(n):
        stack, seen = [i], {i}
        while stack:
            x = stack.pop()
            for y in up[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        rel.update((i, j) for j in seen)
    return rel


def powerset(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, r) for r in range(len(xs) + 1))


