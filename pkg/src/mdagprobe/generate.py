"""Random and exhaustive pDAG families for sweeps."""

from __future__ import annotations

import random
from collections.abc import Iterator
from itertools import combinations, product

from .graph import LATENT, VISIBLE, Pdag
from .order import default_order


def _latent_names(k: int) -> list[str]:
    return [f"u{i}" for i in range(1, k + 1)]


def _arrangements(n_visible: int, n_latent: int) -> Iterator[list[str]]:
    """Node sequences with visible nodes in temporal order and latents interleaved anywhere."""
    visible = list(default_order(n_visible)) if n_visible else []
    latent = _latent_names(n_latent)
    total = n_visible + n_latent
    for slots in combinations(range(total), n_latent):
        seq, vi, li = [], iter(visible), iter(latent)
        for k in range(total):
            seq.append(next(li) if k in slots else next(vi))
        yield seq


def exhaustive_pdags(max_visible: int = 3, max_latent: int = 2, min_visible: int = 1) -> list[Pdag]:
    """Every pDAG up to the given sizes, latents labelled by first appearance.

    Graphs that differ only by a permutation of latent labels may both appear.
    """
    seen = set()
    out = []
    for nv in range(min_visible, max_visible + 1):
        visible = list(default_order(nv)) if nv else []
        for nl in range(max_latent + 1):
            latent = _latent_names(nl)
            nodes = [(v, VISIBLE) for v in visible] + [(u, LATENT) for u in latent]
            for seq in _arrangements(nv, nl):
                pairs = [(seq[i], seq[j]) for i in range(len(seq)) for j in range(i + 1, len(seq))]
                for bits in product((0, 1), repeat=len(pairs)):
                    edges = frozenset(p for p, b in zip(pairs, bits) if b)
                    key = (nv, nl, edges)
                    if key not in seen:
                        seen.add(key)
                        out.append(Pdag(nodes, edges))
    return out


def random_pdag(rng: random.Random | int, max_nodes: int = 6, max_latent: int | None = None, edge_prob: float | None = None) -> Pdag:
    """Random pDAG: a random node arrangement with forward edges kept independently."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    total = rng.randint(1, max_nodes)
    cap = total - 1 if max_latent is None else min(max_latent, total - 1)
    nl = rng.randint(0, cap)
    nv = total - nl
    order = rng.choice(list(_arrangements(nv, nl)))
    p = rng.uniform(0.2, 0.7) if edge_prob is None else edge_prob
    edges = [(order[i], order[j]) for i in range(total) for j in range(i + 1, total) if rng.random() < p]
    nodes = [(v, VISIBLE) for v in default_order(nv)] + [(u, LATENT) for u in _latent_names(nl)]
    return Pdag(nodes, edges)


def latent_free_dags(n: int) -> list[Pdag]:
    """All latent-free pDAGs consistent with the default temporal order on ``n`` nodes."""
    order = default_order(n)
    pairs = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)]
    return [Pdag(order, [e for b, e in enumerate(pairs) if k >> b & 1]) for k in range(1 << len(pairs))]
