import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import path_dseparated

from mdagprobe import GraphError, Pdag, split
from mdagprobe.dsep import DsepQuery, ci_holds, d_separated, latent_free_witness
from mdagprobe.generate import latent_free_dags, random_pdag
from mdagprobe.models import Table, forward, random_params, uniform_cards

CHAIN = Pdag("abc", ["a->b", "b->c"])
FORK = Pdag("abc", ["a->b", "a->c"])
COLLIDER = Pdag("abc", ["a->c", "b->c"])


def test_chain_blocked_by_middle():
    assert d_separated(CHAIN, DsepQuery("a", "c", "b"))
    assert not d_separated(CHAIN, DsepQuery("a", "c"))


def test_collider_opened_by_conditioning():
    assert d_separated(COLLIDER, DsepQuery("a", "b"))
    assert not d_separated(COLLIDER, DsepQuery("a", "b", "c"))


def test_collider_opened_by_descendant():
    g = Pdag("abcd", ["a->c", "b->c", "c->d"])
    assert not d_separated(g, DsepQuery("a", "b", "d"))


def test_fork_vs_chain():
    assert d_separated(FORK, DsepQuery("b", "c", "a"))
    assert not d_separated(CHAIN, DsepQuery("b", "c", "a"))


def test_latent_confounder_connects():
    g = Pdag.build(visible="ab", latent=["u"], edges=["u->a", "u->b"])
    assert not d_separated(g, DsepQuery("a", "b"))


def test_three_pdag_via_split():
    s = split(CHAIN)
    assert not d_separated(s, DsepQuery(["a♯"], ["b♭"]))
    assert d_separated(s, DsepQuery(["a♯"], ["c♭"]))


def test_query_validation():
    with pytest.raises(GraphError):
        DsepQuery("a", "a")
    with pytest.raises(GraphError):
        DsepQuery("a", "b", "a")
    with pytest.raises(GraphError):
        DsepQuery("", "b")
    g = Pdag.build(visible="ab", latent=["u"], edges=["u->a", "u->b"])
    with pytest.raises(GraphError, match="latent"):
        d_separated(g, DsepQuery("a", "u"))
    with pytest.raises(GraphError, match="unknown"):
        d_separated(g, DsepQuery("a", "z"))


def test_ci_product_distribution():
    probs = {(x, y, z): Fraction(1 + x, 3) * Fraction(1 + 2 * y, 4) * Fraction(1, 2) for x in (0, 1) for y in (0, 1) for z in (0, 1)}
    t = Table("xyz", (2, 2, 2), probs)
    assert t.total() == 1
    for A, B, C in [("x", "y", ""), ("x", "y", "z"), ("xz", "y", ""), ("x", "z", "y")]:
        assert ci_holds(t, A, B, C)


def test_ci_perfect_correlation():
    t = Table("xy", (2, 2), {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)})
    assert not ci_holds(t, "x", "y")


def test_ci_zero_slice_is_vacuous():
    # z = 1 never happens; x, y correlated only there would be invisible
    t = Table("xyz", (2, 2, 2), {(0, 0, 0): Fraction(1, 4), (0, 1, 0): Fraction(1, 4), (1, 0, 0): Fraction(1, 4), (1, 1, 0): Fraction(1, 4)})
    assert ci_holds(t, "x", "y", "z")


def test_ci_large_denominators():
    p = Fraction(1, 2**40 + 15)
    t = Table("xy", (2, 2), {(0, 0): p * p, (0, 1): p * (1 - p), (1, 0): (1 - p) * p, (1, 1): (1 - p) ** 2})
    assert ci_holds(t, "x", "y")


def test_latent_free_witness_fork_chain():
    q = latent_free_witness(FORK, CHAIN)
    assert (q.A, q.B, q.C) == ({"a"}, {"c"}, {"b"})


def test_latent_free_witness_adjacent():
    q = latent_free_witness(Pdag("abc", ["a->b"]), Pdag("abc"))
    assert (q.A, q.B, q.C) == ({"a"}, {"b"}, frozenset())


def test_latent_free_witness_errors():
    with pytest.raises(GraphError):
        latent_free_witness(CHAIN, CHAIN)
    with pytest.raises(GraphError):
        latent_free_witness(CHAIN, Pdag("acb"))
    with pytest.raises(GraphError):
        latent_free_witness(CHAIN, Pdag.build(visible="abc", latent=["u"], edges=["u->a", "u->b"]))


def test_latent_free_witness_all_pairs_n3():
    dags = latent_free_dags(3)
    assert len(dags) == 8
    for g, h in combinations(dags, 2):
        q = latent_free_witness(g, h)
        assert d_separated(g, q) != d_separated(h, q)


def _random_query(rng, g):
    vis = list(g.visible)
    rng.shuffle(vis)
    cut1 = rng.randint(1, len(vis) - 1)
    cut2 = rng.randint(cut1 + 1, len(vis))
    C = [v for v in vis[cut2:] if rng.random() < 0.7]
    return DsepQuery(vis[:cut1], vis[cut1:cut2], C)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bayes_ball_matches_path_enumeration(seed):
    rng = random.Random(seed)
    g = random_pdag(rng, max_nodes=6)
    if len(g.visible) < 2:
        return
    q = _random_query(rng, g)
    assert d_separated(g, q) == path_dseparated(g, q.A, q.B, q.C)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_dseparation_implies_independence(seed):
    rng = random.Random(seed)
    g = rng.choice(latent_free_dags(4))
    dist = forward(g, random_params(g, uniform_cards(g), rng))
    for _ in range(10):
        q = _random_query(rng, g)
        if d_separated(g, q):
            assert ci_holds(dist, q.A, q.B, q.C)
