"""Rewrites from pDAGs to RE-reduced pDAGs and mDAGs, and back again."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import INPUT, LATENT, VISIBLE, GraphError, Mdag, Pdag, ThreeMdag, ThreePdag

EXOGENIZE = "exogenize"
REMOVE_REDUNDANT = "remove-redundant"


@dataclass(frozen=True)
class ReductionStep:
    rule: str
    target: str
    graph: Pdag


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...] = ()

    def __len__(self):
        return len(self.steps)

    def to_json(self) -> list[dict]:
        from .io import pdag_to_json

        return [{"rule": s.rule, "target": s.target, "graph": pdag_to_json(s.graph)} for s in self.steps]


def exogenize(g: Pdag, u: str) -> Pdag:
    """Make latent ``u`` parentless by wiring its parents straight to its children."""
    if g.kinds.get(u) != LATENT:
        raise GraphError(f"{u!r} is not a latent node")
    parents = g.parents(u)
    if not parents:
        raise GraphError(f"latent {u!r} is already exogenous")
    children = g.children(u)
    edges = {e for e in g.edges if e[1] != u}
    edges.update((p, c) for p in parents for c in children)
    return g.replace(edges=edges)


def _drop_latent(g: Pdag, u: str) -> Pdag:
    nodes = [n for n in g.nodes if n[0] != u]
    return g.replace(nodes=nodes, edges=[e for e in g.edges if u not in e])


def _exog_all(g: Pdag, steps: list[ReductionStep] | None) -> Pdag:
    # Added edges run from an ancestor of u to a descendant of u, so the original
    # topological order stays valid and each latent needs visiting only once.
    for u in g.topological_order:
        if g.kinds[u] == LATENT and g.parents(u):
            g = exogenize(g, u)
            if steps is not None:
                steps.append(ReductionStep(EXOGENIZE, u, g))
    return g


def exog_all(g: Pdag) -> Pdag:
    """Exogenize every endogenous latent node."""
    return _exog_all(g, None)


def redundant_latents(g: Pdag) -> list[str]:
    """Latents that remove_redundant would delete, in deletion order.

    Survivors are picked greedily: larger children sets first, then smaller id.
    A latent with fewer than two children never survives; its influence fits
    inside the single child's own error term.
    """
    order = sorted(g.latent, key=lambda u: (-len(g.children(u)), u))
    kept: list[frozenset[str]] = []
    dropped = []
    for u in order:
        ch = frozenset(g.children(u))
        if len(ch) < 2 or any(ch <= other for other in kept):
            dropped.append(u)
        else:
            kept.append(ch)
    return dropped


def _remove_redundant(g: Pdag, steps: list[ReductionStep] | None) -> Pdag:
    endogenous = [u for u in g.latent if g.parents(u)]
    if endogenous:
        raise GraphError(f"remove_redundant needs exogenous latents; endogenous: {endogenous}")
    for u in redundant_latents(g):
        g = _drop_latent(g, u)
        if steps is not None:
            steps.append(ReductionStep(REMOVE_REDUNDANT, u, g))
    return g


def remove_redundant(g: Pdag) -> Pdag:
    """Delete latents whose children are already covered by another latent."""
    return _remove_redundant(g, None)


def re_reduce(g: Pdag) -> tuple[Pdag, ReductionTrace]:
    steps: list[ReductionStep] = []
    g = _exog_all(g, steps)
    g = _remove_redundant(g, steps)
    return g, ReductionTrace(tuple(steps))


def replay(g: Pdag, trace: ReductionTrace) -> Pdag:
    """Re-apply the rules recorded in ``trace`` to ``g``."""
    for step in trace.steps:
        if step.rule == EXOGENIZE:
            g = exogenize(g, step.target)
        elif step.rule == REMOVE_REDUNDANT:
            if g.kinds.get(step.target) != LATENT:
                raise GraphError(f"{step.target!r} is not a latent node")
            g = _drop_latent(g, step.target)
        else:
            raise GraphError(f"unknown rule {step.rule!r}")
    return g


def lnodes_to_faces(g: Pdag) -> Mdag:
    """mDAG of ``g``: visible edges plus one face per surviving latent's children.

    A :class:`ThreePdag` maps to a :class:`ThreeMdag` with the same input nodes.
    """
    r, _ = re_reduce(g)
    observed = [n for n, k in r.nodes if k != LATENT]
    directed = [e for e in r.edges if r.kinds[e[0]] != LATENT]
    facets = [r.children(u) for u in r.latent]
    if isinstance(g, ThreePdag):
        return ThreeMdag(observed, directed, facets, inputs=r.inputs)
    return Mdag(observed, directed, facets)


def latent_name(facet, taken=()) -> str:
    name = "λ" + "_".join(sorted(facet))
    while name in taken:
        name += "'"
    return name


def canonical_pdag(m: Mdag) -> Pdag:
    """One latent per facet with at least two members, appended after the observed nodes."""
    three = isinstance(m, ThreeMdag)
    nodes = [(n, INPUT if three and n in m.inputs else VISIBLE) for n in m.nodes]
    taken = set(m.nodes)
    edges = list(m.directed)
    for facet in m.complex.nontrivial_facets():
        name = latent_name(facet, taken)
        taken.add(name)
        nodes.append((name, LATENT))
        edges.extend((name, c) for c in facet)
    return (ThreePdag if three else Pdag)(nodes, edges)


def equal_up_to_latent_relabel(g: Pdag, h: Pdag) -> bool:
    """Compare two pDAGs whose latents are all exogenous, ignoring latent names.

    Latents are identified by their children sets, which must be distinct.
    """
    observed_g = [n for n in g.nodes if n[1] != LATENT]
    observed_h = [n for n in h.nodes if n[1] != LATENT]
    if observed_g != observed_h or len(g.latent) != len(h.latent):
        return False

    def signature(x: Pdag):
        plain = frozenset(e for e in x.edges if x.kinds[e[0]] != LATENT and x.kinds[e[1]] != LATENT)
        kids = [frozenset(x.children(u)) for u in x.latent]
        latent_parents = [frozenset(x.parents(u)) for u in x.latent]
        return plain, sorted(zip(map(sorted, kids), map(sorted, latent_parents)))

    return signature(g) == signature(h)
