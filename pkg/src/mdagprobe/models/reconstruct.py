"""Rebuild the full conditional of binary variables from all-patterns data.

For ♯ values ``y`` and a target ``x`` on a node set ``S``, split ``S`` into the
nodes where ``x`` agrees with ``y`` (``M``) and where it disagrees (``D``).
Observing a node while forcing all others yields ``♭ = ♯`` for it, so

    P(♭_S = x_S | ♯ = y) = sum over T ⊆ D of (-1)^|T| Q_{V∖(M∪T)}(X_{M∪T} = y_{M∪T})

with every forced node held at its ``y`` value.  Binary variables make
"disagrees with y" the same as "equals x".
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .simulate import ZERO, FullConditional, ModelError, ProbeDataset


class MissingPatternError(ModelError):
    """A pattern needed by the inclusion-exclusion sum is not in the dataset."""


def _require_binary(ds: ProbeDataset, nodes: Iterable[str]) -> None:
    bad = [n for n in nodes if ds.cards[n] != 2]
    if bad:
        raise ModelError(f"reconstruction needs binary variables; non-binary: {bad}")


def _observed_prob(ds: ProbeDataset, observed: Sequence[str], y: Mapping[str, int]) -> Fraction:
    """Q(X_observed = y_observed | do(rest = y_rest))."""
    observed = set(observed)
    forced = {n: y[n] for n in ds.nodes if n not in observed}
    table = ds.lookup(forced)
    if table is None:
        raise MissingPatternError(f"dataset lacks pattern do{tuple(forced)}={tuple(forced.values())}")
    return table[tuple(y[n] for n in table.variables)]


def reconstruct_value(ds: ProbeDataset, subset: Sequence[str], x: Sequence[int], y: Mapping[str, int]) -> Fraction:
    """P(♭_subset = x | ♯ = y) with every ♭ outside ``subset`` summed out."""
    matched = [s for s, xs in zip(subset, x) if xs == y[s]]
    differ = [s for s, xs in zip(subset, x) if xs != y[s]]
    total = ZERO
    for r in range(len(differ) + 1):
        sign = -1 if r % 2 else 1
        for extra in combinations(differ, r):
            total += sign * _observed_prob(ds, matched + list(extra), y)
    return total


def reconstruct_marginal(ds: ProbeDataset, subset: Sequence[str], y: Mapping[str, int]) -> dict[tuple[int, ...], Fraction]:
    """Every entry of P(♭_subset | ♯ = y) for binary ``subset``."""
    subset = list(subset)
    _require_binary(ds, subset)
    return {x: reconstruct_value(ds, subset, x, y) for x in product((0, 1), repeat=len(subset))}


def reconstruct_binary(ds: ProbeDataset) -> FullConditional:
    """Full conditional of a binary all-patterns dataset."""
    nodes = ds.nodes
    _require_binary(ds, nodes)
    n = len(nodes)
    arr = np.empty((2,) * (2 * n), dtype=object)
    for y in product((0, 1), repeat=n):
        ymap = dict(zip(nodes, y))
        for x in product((0, 1), repeat=n):
            arr[y + x] = reconstruct_value(ds, nodes, x, ymap)
    fc = FullConditional(nodes, (2,) * n, arr)
    # the alternating sums always total 1, so inconsistency shows up as a negative entry
    if not fc.is_normalized() or any(v < 0 for v in arr.flat):
        raise ModelError("reconstructed conditional is not a distribution; dataset is inconsistent")
    return fc
