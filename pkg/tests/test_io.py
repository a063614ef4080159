import json
import random
from fractions import Fraction

import pytest

from mdagprobe import GraphError, Mdag, Pdag, split
from mdagprobe.generate import random_pdag
from mdagprobe.io import (
    dataset_from_json,
    dataset_to_json,
    dumps,
    fc_from_json,
    fc_to_json,
    frac,
    graph_from_json,
    graph_to_json,
    params_from_json,
    params_to_json,
    parse_frac,
)
from mdagprobe.models import copy_construction, full_conditional, generate_all_patterns, random_params, uniform_cards


def through_text(d):
    return json.loads(dumps(d))


def test_fractions():
    assert frac(Fraction(2, 4)) == "1/2"
    assert frac(1) == "1/1"
    assert parse_frac("3/6") == Fraction(1, 2)
    assert parse_frac(1) == 1
    with pytest.raises(GraphError):
        parse_frac(0.5)


@pytest.mark.parametrize("seed", range(20))
def test_pdag_round_trip(seed):
    g = random_pdag(random.Random(seed))
    assert graph_from_json(through_text(graph_to_json(g))) == g
    s = split(g)
    d = through_text(graph_to_json(s))
    assert all(n["id"].isascii() for n in d["nodes"])
    assert graph_from_json(d) == s


def test_mdag_round_trip():
    for m in (Mdag("abc", ["a->b"], [["a", "c"]]), split(Mdag("ab", [], [["a", "b"]]))):
        assert graph_from_json(through_text(graph_to_json(m))) == m


def test_dumps_is_canonical():
    g = Pdag("ab", ["a->b"])
    assert dumps(graph_to_json(g)) == dumps(graph_to_json(Pdag("ab", [("a", "b")])))
    assert dumps(graph_to_json(g)).endswith("\n")


def test_dataset_round_trip():
    g = Pdag.build(visible="ab", latent=["u"], edges=["u->a", "u->b", "a->b"])
    par = random_params(g, uniform_cards(g), 4)
    ds = generate_all_patterns(g, par)
    assert dataset_from_json(through_text(dataset_to_json(ds))) == ds
    _, witness = copy_construction(Mdag("ab", [], [["a", "b"]]), "ab")
    assert dataset_from_json(through_text(dataset_to_json(witness))) == witness


def test_full_conditional_round_trip():
    g = Pdag("abc", ["a->b", "b->c"])
    par = random_params(g, {"a": 2, "b": 3, "c": 2}, 9)
    fc = full_conditional(g, par)
    assert fc_from_json(through_text(fc_to_json(fc))) == fc


def test_params_round_trip():
    g = Pdag.build(visible="ab", latent=["u"], edges=["u->a", "u->b"])
    par = random_params(g, uniform_cards(g, 3), 1)
    back = params_from_json(through_text(params_to_json(par)))
    assert back.mechanisms == par.mechanisms and back.cards == par.cards


def test_bad_graph_json():
    with pytest.raises((GraphError, KeyError, TypeError)):
        graph_from_json({"nodes": [{"id": "a", "kind": "visible"}], "edges": [["a", "a"]]})
