"""Exact discrete causal models: parameters, forward simulation and shadows."""

from __future__ import annotations

import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import prod

import numpy as np

from ..graph import INPUT, LATENT, VISIBLE, GraphError, Pdag
from ..swig import flat, sharp, split

ONE = Fraction(1)
ZERO = Fraction(0)


class ModelError(ValueError):
    """Shape or range mismatch between a graph, its parameters and its cardinalities."""


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def config_index(values: Iterable[int], cards: Iterable[int]) -> int:
    """Row-major index of a parent configuration, last parent fastest."""
    idx = 0
    for v, c in zip(values, cards):
        idx = idx * c + v
    return idx


@dataclass(frozen=True)
class Mechanism:
    """Response functions of one node together with its error distribution.

    ``responses[e][k]`` is the node's state when the error takes value ``e`` and
    the parents are in configuration ``k`` (see :func:`config_index`).
    """

    parents: tuple[str, ...]
    responses: tuple[tuple[int, ...], ...]
    error: tuple[Fraction, ...]

    def __init__(self, parents, responses, error):
        object.__setattr__(self, "parents", tuple(parents))
        object.__setattr__(self, "responses", tuple(tuple(int(s) for s in r) for r in responses))
        object.__setattr__(self, "error", tuple(_as_fraction(w) for w in error))
        if len(self.responses) != len(self.error):
            raise ModelError("one response function per error value is required")
        if any(w < 0 for w in self.error) or sum(self.error) != 1:
            raise ModelError(f"error distribution {self.error} is not normalized")

    @classmethod
    def constant(cls, value: int, parents=(), n_configs: int = 1):
        return cls(parents, [[value] * n_configs], [ONE])


@dataclass(frozen=True)
class Params:
    """Mechanisms for every non-input node plus the cardinality of every node."""

    mechanisms: Mapping[str, Mechanism]
    cards: Mapping[str, int]

    def __init__(self, mechanisms, cards):
        object.__setattr__(self, "mechanisms", dict(mechanisms))
        object.__setattr__(self, "cards", {k: int(v) for k, v in cards.items()})
        for node, mech in self.mechanisms.items():
            if node not in self.cards:
                raise ModelError(f"no cardinality for {node!r}")
            try:
                pcards = [self.cards[p] for p in mech.parents]
            except KeyError as exc:
                raise ModelError(f"no cardinality for parent {exc.args[0]!r} of {node!r}") from None
            width = prod(pcards)
            for r in mech.responses:
                if len(r) != width:
                    raise ModelError(f"response table of {node!r} has {len(r)} rows, expected {width}")
                if any(not 0 <= s < self.cards[node] for s in r):
                    raise ModelError(f"response of {node!r} leaves the state space")

    def __hash__(self):
        return hash(tuple(sorted(self.cards.items())))

    def cpt(self, node: str) -> list[list[Fraction]]:
        """Conditional table ``cpt[k][x] = P(node = x | parent configuration k)``."""
        cache = self.__dict__.setdefault("_cpt", {})
        if node not in cache:
            mech = self.mechanisms[node]
            width = prod(self.cards[p] for p in mech.parents)
            table = [[ZERO] * self.cards[node] for _ in range(width)]
            for resp, w in zip(mech.responses, mech.error):
                if w:
                    for k, s in enumerate(resp):
                        table[k][s] += w
            cache[node] = table
        return cache[node]

    def check_graph(self, g: Pdag) -> None:
        for node, kind in g.nodes:
            if node not in self.cards:
                raise ModelError(f"no cardinality for {node!r}")
            if kind == INPUT:
                continue
            mech = self.mechanisms.get(node)
            if mech is None:
                raise ModelError(f"no mechanism for {node!r}")
            if set(mech.parents) != set(g.parents(node)):
                raise ModelError(f"mechanism parents of {node!r} {mech.parents} differ from graph parents {g.parents(node)}")

    def renamed(self, node_map: Mapping[str, str], parent_map: Mapping[str, str]) -> Params:
        """Copy with nodes renamed through ``node_map`` and parent references through ``parent_map``."""
        mechs = {
            node_map.get(n, n): Mechanism([parent_map.get(p, p) for p in m.parents], m.responses, m.error)
            for n, m in self.mechanisms.items()
        }
        cards = {}
        for n, c in self.cards.items():
            cards[node_map.get(n, n)] = c
            if n in parent_map:
                cards[parent_map[n]] = c
        return Params(mechs, cards)


@dataclass(frozen=True)
class Table:
    """Dense exact distribution over ``variables``; keys are state tuples in variable order."""

    variables: tuple[str, ...]
    cards: tuple[int, ...]
    probs: Mapping[tuple[int, ...], Fraction] = field(compare=True)

    def __init__(self, variables, cards, probs):
        variables, cards = tuple(variables), tuple(cards)
        dense = {key: ZERO for key in product(*map(range, cards))}
        for key, value in probs.items():
            key = tuple(key)
            if key not in dense:
                raise ModelError(f"assignment {key} out of range for cards {cards}")
            dense[key] = _as_fraction(value)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "cards", cards)
        object.__setattr__(self, "probs", dense)

    def __getitem__(self, key) -> Fraction:
        return self.probs[tuple(key)]

    def total(self) -> Fraction:
        return sum(self.probs.values(), ZERO)

    def marginal(self, keep: Iterable[str]) -> Table:
        keep = [v for v in self.variables if v in set(keep)]
        idx = [self.variables.index(v) for v in keep]
        out: dict[tuple[int, ...], Fraction] = {}
        for key, value in self.probs.items():
            sub = tuple(key[i] for i in idx)
            out[sub] = out.get(sub, ZERO) + value
        return Table(keep, [self.cards[i] for i in idx], out)

    def reordered(self, variables) -> Table:
        variables = tuple(variables)
        idx = [self.variables.index(v) for v in variables]
        probs = {tuple(key[i] for i in idx): p for key, p in self.probs.items()}
        return Table(variables, [self.cards[i] for i in idx], probs)


def _cards_for(g: Pdag, cards: Mapping[str, int], nodes) -> tuple[int, ...]:
    try:
        return tuple(cards[n] for n in nodes)
    except KeyError as exc:
        raise ModelError(f"no cardinality for {exc.args[0]!r}") from None


def _propagate(g: Pdag, par: Params, fixed: Mapping[str, int], outputs) -> Table:
    """Sum out latents and errors, holding ``fixed`` nodes at their values.

    Variables are eliminated as soon as their last child has been processed,
    so intermediate tables stay small on sparse graphs.
    """
    outputs = tuple(outputs)
    keep = set(outputs)
    for node, value in fixed.items():
        if not 0 <= value < par.cards[node]:
            raise ModelError(f"value {value} out of range for {node!r}")
    order = [n for n in g.topological_order if n not in fixed]
    step = {n: i for i, n in enumerate(order)}
    last_use = {n: max((step[c] for c in g.children(n) if c in step), default=-1) for n in order}

    names: list[str] = []
    factor: dict[tuple[int, ...], Fraction] = {(): ONE}
    for i, node in enumerate(order):
        mech = par.mechanisms[node]
        cpt = par.cpt(node)
        slots = [(names.index(p), None) if p not in fixed else (None, fixed[p]) for p in mech.parents]
        pcards = [par.cards[p] for p in mech.parents]
        new: dict[tuple[int, ...], Fraction] = {}
        for key, w in factor.items():
            conf = config_index((key[j] if j is not None else v for j, v in slots), pcards)
            for state, q in enumerate(cpt[conf]):
                if q:
                    new[key + (state,)] = w * q
        names.append(node)
        factor = new
        dead = [j for j, n in enumerate(names) if n not in keep and last_use[n] <= i]
        if dead:
            live = [j for j in range(len(names)) if j not in dead]
            merged: dict[tuple[int, ...], Fraction] = {}
            for key, w in factor.items():
                sub = tuple(key[j] for j in live)
                merged[sub] = merged.get(sub, ZERO) + w
            names = [names[j] for j in live]
            factor = merged

    missing = [o for o in outputs if o not in names]
    if missing:
        raise ModelError(f"outputs {missing} are not free nodes of the graph")
    table = Table(names, _cards_for(g, par.cards, names), factor)
    return table.reordered(outputs)


def forward(g: Pdag, par: Params, do: Mapping[str, int] | None = None) -> Table:
    """Distribution of the visible nodes outside ``do`` under truncated factorization.

    The mechanisms of nodes in ``do`` are deleted and their children read the
    forced value.
    """
    do = dict(do or {})
    par.check_graph(g)
    for a in do:
        if g.kinds.get(a) != VISIBLE:
            raise ModelError(f"cannot intervene on non-visible node {a!r}")
    outputs = [v for v in g.visible if v not in do]
    return _propagate(g, par, do, outputs)


@dataclass(frozen=True, eq=False)
class FullConditional:
    """Exact tensor ``P(♭ | ♯)`` indexed ``[♯ states..., ♭ states...]`` in temporal order."""

    nodes: tuple[str, ...]
    cards: tuple[int, ...]
    array: np.ndarray

    def __eq__(self, other):
        return (
            isinstance(other, FullConditional)
            and self.nodes == other.nodes
            and self.cards == other.cards
            and self.array.shape == other.array.shape
            and bool(np.all(self.array == other.array))
        )

    __hash__ = None

    @cached_property
    def n(self) -> int:
        return len(self.nodes)

    def slice_sums(self) -> np.ndarray:
        n = self.n
        return self.array.sum(axis=tuple(range(n, 2 * n))) if n else self.array

    def is_normalized(self) -> bool:
        return bool(np.all(self.slice_sums() == 1))

    def value(self, sharp_values, flat_values) -> Fraction:
        return self.array[tuple(sharp_values) + tuple(flat_values)]


def split_params(g: Pdag, par: Params) -> Params:
    """Parameters of the full split: ``a♭`` inherits the mechanism of ``a``, reading ``♯`` parents."""
    node_map = {v: flat(v) for v in g.visible}
    parent_map = {v: sharp(v) for v in g.visible}
    return par.renamed(node_map, parent_map)


def full_conditional(g: Pdag, par: Params, cards: Mapping[str, int] | None = None) -> FullConditional:
    """Exact ``P(♭ | ♯)`` obtained by evaluating the full split of ``g``."""
    if cards is not None:
        for n in g.names:
            if n in cards and par.cards.get(n) != cards[n]:
                raise ModelError(f"cardinality of {n!r} disagrees with the parameters")
    par.check_graph(g)
    s = split(g)
    spar = split_params(g, par)
    nodes = g.visible
    vcards = _cards_for(g, par.cards, nodes)
    flats = [flat(v) for v in nodes]
    sharps = [sharp(v) for v in nodes]
    arr = np.empty(vcards + vcards, dtype=object)
    for y in product(*map(range, vcards)):
        table = _propagate(s, spar, dict(zip(sharps, y)), flats)
        for x, p in table.probs.items():
            arr[y + x] = p
    return FullConditional(nodes, vcards, arr)


def observational_shadow(fc: FullConditional) -> Table:
    """Distribution read off the diagonal where each ♯ value equals its ♭ value."""
    probs = {x: fc.array[x + x] for x in product(*map(range, fc.cards))}
    total = sum(probs.values(), ZERO)
    if total != 1:
        raise ModelError(f"observational shadow sums to {total}")
    return Table(fc.nodes, fc.cards, probs)


def do_pattern_shadow(fc: FullConditional, do_nodes: Iterable[str], values: Iterable[int]) -> Table:
    """Table over the nodes outside ``do_nodes`` when those are forced to ``values``.

    The ♭ copies of forced nodes are summed out; every other node has its ♯
    value tied to its ♭ value.
    """
    do_nodes = list(do_nodes)
    values = list(values)
    if len(do_nodes) != len(values):
        raise ModelError("one value per intervened node is required")
    pos = {v: i for i, v in enumerate(fc.nodes)}
    forced = {}
    for a, x in zip(do_nodes, values):
        if a not in pos:
            raise ModelError(f"unknown node {a!r}")
        if not 0 <= x < fc.cards[pos[a]]:
            raise ModelError(f"value {x} out of range for {a!r}")
        forced[pos[a]] = x
    rest = [i for i in range(fc.n) if i not in forced]
    rest_cards = [fc.cards[i] for i in rest]
    forced_cards = [fc.cards[i] for i in forced]
    probs = {}
    for xr in product(*map(range, rest_cards)):
        y = [0] * fc.n
        for i, x in forced.items():
            y[i] = x
        for i, x in zip(rest, xr):
            y[i] = x
        total = ZERO
        for xa in product(*map(range, forced_cards)):
            flat_state = list(y)
            for i, x in zip(forced, xa):
                flat_state[i] = x
            total += fc.array[tuple(y) + tuple(flat_state)]
        probs[xr] = total
    return Table([fc.nodes[i] for i in rest], rest_cards, probs)


@dataclass(frozen=True)
class Pattern:
    do: tuple[str, ...]
    values: tuple[int, ...]
    table: Table

    @property
    def key(self) -> tuple[tuple[str, ...], tuple[int, ...]]:
        return self.do, self.values


@dataclass(frozen=True)
class ProbeDataset:
    """Tables from several do-patterns, keyed by (intervened nodes, forced values)."""

    nodes: tuple[str, ...]
    cards: Mapping[str, int]
    patterns: tuple[Pattern, ...]

    def __init__(self, nodes, cards, patterns):
        nodes = tuple(nodes)
        pos = {n: i for i, n in enumerate(nodes)}
        normalized = []
        seen = set()
        for pat in patterns:
            order = sorted(range(len(pat.do)), key=lambda k: pos[pat.do[k]])
            do = tuple(pat.do[k] for k in order)
            values = tuple(pat.values[k] for k in order)
            rest = tuple(n for n in nodes if n not in set(do))
            table = pat.table.reordered(rest) if pat.table.variables != rest else pat.table
            if table.total() != 1:
                raise ModelError(f"table for do{do}={values} is not normalized")
            if (do, values) in seen:
                raise ModelError(f"duplicate pattern do{do}={values}")
            seen.add((do, values))
            normalized.append(Pattern(do, values, table))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "cards", {n: int(cards[n]) for n in nodes})
        object.__setattr__(self, "patterns", tuple(normalized))

    def __hash__(self):
        return hash((self.nodes, tuple(p.key for p in self.patterns)))

    @cached_property
    def index(self) -> dict[tuple[tuple[str, ...], tuple[int, ...]], Table]:
        return {p.key: p.table for p in self.patterns}

    def lookup(self, do: Mapping[str, int]) -> Table | None:
        pos = {n: i for i, n in enumerate(self.nodes)}
        keys = sorted(do, key=pos.__getitem__)
        return self.index.get((tuple(keys), tuple(do[k] for k in keys)))

    @property
    def do_values_used(self) -> set[int]:
        return {v for p in self.patterns for v in p.values}


def subsets_in_mask_order(nodes) -> list[tuple[str, ...]]:
    nodes = tuple(nodes)
    return [tuple(n for i, n in enumerate(nodes) if mask >> i & 1) for mask in range(1 << len(nodes))]


def generate_all_patterns(g: Pdag, par: Params, cards: Mapping[str, int] | None = None, one_do: bool = False) -> ProbeDataset:
    """Simulate every do-pattern of ``g``; with ``one_do`` only the all-zeros forcing."""
    if cards is not None:
        for n, c in cards.items():
            if par.cards.get(n, c) != c:
                raise ModelError(f"cardinality of {n!r} disagrees with the parameters")
    patterns = []
    for subset in subsets_in_mask_order(g.visible):
        choices = [(0,) * len(subset)] if one_do else product(*(range(par.cards[a]) for a in subset))
        for values in choices:
            patterns.append(Pattern(subset, tuple(values), forward(g, par, dict(zip(subset, values)))))
    return ProbeDataset(g.visible, {v: par.cards[v] for v in g.visible}, patterns)


def dataset_from_patterns(g: Pdag, par: Params, keys) -> ProbeDataset:
    """Simulate only the listed ``(do nodes, values)`` patterns."""
    patterns = [Pattern(tuple(a), tuple(x), forward(g, par, dict(zip(a, x)))) for a, x in keys]
    return ProbeDataset(g.visible, {v: par.cards[v] for v in g.visible}, patterns)


def _random_weights(rng: random.Random, k: int) -> list[Fraction]:
    raw = [rng.randint(1, 6) for _ in range(k)]
    total = sum(raw)
    return [Fraction(r, total) for r in raw]


def random_params(g: Pdag, cards: Mapping[str, int], rng: random.Random | int = 0, max_responses: int = 3) -> Params:
    """Random mechanisms: a few random response functions mixed by random rational weights."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    mechs = {}
    for node, kind in g.nodes:
        if kind == INPUT:
            continue
        parents = g.parents(node)
        width = prod(cards[p] for p in parents)
        k = rng.randint(1, max_responses)
        responses = [[rng.randrange(cards[node]) for _ in range(width)] for _ in range(k)]
        mechs[node] = Mechanism(parents, responses, _random_weights(rng, k))
    return Params(mechs, {n: cards[n] for n in g.names})


def random_cards(g: Pdag, rng: random.Random, choices=(2, 3)) -> dict[str, int]:
    return {n: rng.choice(choices) for n in g.names}


def uniform_cards(g: Pdag, c: int = 2) -> dict[str, int]:
    return dict.fromkeys(g.names, c)


__all__ = [
    "FullConditional",
    "GraphError",
    "LATENT",
    "Mechanism",
    "ModelError",
    "Params",
    "Pattern",
    "ProbeDataset",
    "Table",
    "config_index",
    "dataset_from_patterns",
    "do_pattern_shadow",
    "forward",
    "full_conditional",
    "generate_all_patterns",
    "observational_shadow",
    "random_cards",
    "random_params",
    "split_params",
    "subsets_in_mask_order",
    "uniform_cards",
]
