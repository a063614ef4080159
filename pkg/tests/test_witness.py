import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdagprobe import GraphError, Mdag, Pdag, canonical_pdag, structurally_dominates
from mdagprobe.generate import random_pdag
from mdagprobe.models import (
    FEASIBLE,
    INFEASIBLE_COMMON_ANCESTOR,
    INFEASIBLE_DCONNECTION,
    UNDECIDED,
    DominanceCertificate,
    Mechanism,
    ModelError,
    Params,
    Witness,
    certify_infeasible,
    chain_construction,
    conditional_contrast,
    copy_construction,
    dominance_witness,
    generate_all_patterns,
    random_params,
    uniform_cards,
    verify_realization,
    visible_mediaries,
)
from mdagprobe.order import enumerate_mdags

half = Fraction(1, 2)
THREE_WAY = Mdag("abc", ["a->b"], [["a", "b", "c"]])
AC_ONLY = Mdag("abc", ["a->b"], [["a", "c"]])
AC_BC = Mdag("abc", ["a->b"], [["a", "c"], ["b", "c"]])
TRIANGLE = Mdag("012", [], [["0", "1", "2"]])
HOLLOW = Mdag("012", [], [["0", "1"], ["0", "2"], ["1", "2"]])


@pytest.mark.parametrize("g", [AC_ONLY, AC_BC])
def test_three_way_confounder_discriminated(g):
    w = dominance_witness(g, THREE_WAY)
    assert isinstance(w, Witness)
    assert w.kind == "copy" and w.target == ("a", "b", "c")
    assert w.verdict.status == INFEASIBLE_COMMON_ANCESTOR
    assert verify_realization(w.h_pdag, w.params, w.dataset).status == FEASIBLE
    assert w.dataset.do_values_used == {0}
    # perfectly correlated under observation and with a forced
    obs = w.dataset.lookup({})
    assert {k for k, v in obs.probs.items() if v} == {(0, 0, 0), (1, 1, 1)}
    after = w.dataset.lookup({"a": 0})
    assert {k for k, v in after.probs.items() if v} == {(0, 0), (1, 1)}


def test_triangle_copy_witness():
    par, ds = copy_construction(TRIANGLE, "012", half)
    assert verify_realization(canonical_pdag(TRIANGLE), par, ds).status == FEASIBLE
    verdict = certify_infeasible(canonical_pdag(HOLLOW), ds)
    assert verdict.status == INFEASIBLE_COMMON_ANCESTOR
    assert verdict.certificate["nodes"] == ["0", "1", "2"]
    assert verdict.certificate["p"] == half


def test_copy_dataset_layout():
    _, ds = copy_construction(TRIANGLE, "012", half)
    # observation plus all eight subsets of S, with the empty subset forcing everything
    assert len(ds.patterns) == 8
    assert ds.lookup({"0": 0, "1": 0, "2": 0})[()] == 1


def test_edgeless_vs_chain_dataset():
    par, ds = chain_construction(Mdag("ab", ["a->b"]), ("a", "b"))
    assert verify_realization(Pdag("ab", ["a->b"]), par, ds).status == FEASIBLE
    verdict = certify_infeasible(Pdag("ab"), ds)
    assert verdict.status == INFEASIBLE_DCONNECTION
    assert verdict.certificate["source"] == "a" and verdict.certificate["target"] == "b"


def test_chain_contrast_two_nodes():
    _, ds = chain_construction(Mdag("ab", ["a->b"]), ("a", "b"))
    assert conditional_contrast(ds, "a", "b") == (half, 1)


def test_chain_witness_with_mediary():
    g = Mdag("amb", ["a->m", "m->b"])
    h = Mdag("amb", ["a->b"])
    assert visible_mediaries(g, "a", "b") == ("m",)
    w = dominance_witness(g, h)
    assert w.kind == "chain" and w.target == ("a", "b") and w.mediaries == ("m",)
    assert w.verdict.infeasible
    assert conditional_contrast(w.dataset, "a", "b", w.mediaries) == (half, 1)


def test_own_witness_is_undecided():
    par, ds = copy_construction(TRIANGLE, "012", half)
    assert certify_infeasible(canonical_pdag(TRIANGLE), ds).status == UNDECIDED
    par, ds = chain_construction(Mdag("ab", ["a->b"]), ("a", "b"))
    assert certify_infeasible(Pdag("ab", ["a->b"]), ds).status == UNDECIDED


def test_deterministic_copy_is_not_refuted():
    par, ds = copy_construction(TRIANGLE, "012", 1)
    assert all(max(pat.table.probs.values()) == 1 for pat in ds.patterns)
    # constant data is realizable by any graph
    assert certify_infeasible(canonical_pdag(HOLLOW), ds).status == UNDECIDED


def test_dominating_pair_gives_certificate():
    cert = dominance_witness(TRIANGLE, HOLLOW)
    assert isinstance(cert, DominanceCertificate)
    assert cert.edges == ()
    assert ("0", "1") in cert.faces and ("0", "1", "2") not in cert.faces
    cert = dominance_witness(THREE_WAY, AC_ONLY)
    assert cert.edges == (("a", "b"),)


def test_construction_errors():
    with pytest.raises(ModelError):
        copy_construction(HOLLOW, "012")
    with pytest.raises(ModelError):
        copy_construction(TRIANGLE, "012", 2)
    with pytest.raises(ModelError):
        chain_construction(TRIANGLE, ("0", "1"))
    with pytest.raises(GraphError):
        dominance_witness(TRIANGLE, Mdag("ab"))
    _, ds = copy_construction(TRIANGLE, "01")
    with pytest.raises(ModelError):
        certify_infeasible(Pdag("ab"), ds)


def test_singleton_copy():
    m = Mdag("ab")
    par, ds = copy_construction(m, "a", Fraction(1, 3))
    assert verify_realization(canonical_pdag(m), par, ds).status == FEASIBLE
    assert ds.lookup({})[(1, 0)] == Fraction(2, 3)


def test_verify_realization_rejects_wrong_params():
    par, ds = copy_construction(TRIANGLE, "012", half)
    g = canonical_pdag(TRIANGLE)
    mechs = dict(par.mechanisms)
    (latent,) = g.latent
    mechs[latent] = Mechanism((), [[0], [1]], [Fraction(1, 3), Fraction(2, 3)])
    assert verify_realization(g, Params(mechs, par.cards), ds).status == UNDECIDED


def test_mediated_confounding_is_not_refuted():
    # a -> m -> b with a latent on {m, b}; observational P(b | m) and P(b | m, do(a))
    # differ even though no edge a -> b exists
    g = Pdag.build(visible="amb", latent=["l"], edges=["a->m", "m->b", "l->m", "l->b"])
    par = Params(
        {
            "a": Mechanism((), [[0], [1]], [half, half]),
            "l": Mechanism((), [[0], [1]], [half, half]),
            "m": Mechanism(("a", "l"), [[0, 1, 1, 0]], [1]),
            "b": Mechanism(("m", "l"), [[0, 1, 0, 1]], [1]),
        },
        uniform_cards(g),
    )
    ds = generate_all_patterns(g, par, one_do=True)
    assert conditional_contrast(ds, "a", "b", ["m"]) == (half, 1)
    assert not certify_infeasible(g, ds).infeasible


def test_all_pairs_n2():
    cat = enumerate_mdags(2)
    for g, h in product(cat, repeat=2):
        out = dominance_witness(g, h)
        if structurally_dominates(g, h):
            assert isinstance(out, DominanceCertificate)
        else:
            assert out.verdict.infeasible
            assert verify_realization(out.h_pdag, out.params, out.dataset).status == FEASIBLE


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_certificate_sound_on_realizable_data(seed, one_do):
    rng = random.Random(seed)
    g = random_pdag(rng, max_nodes=5)
    while len(g.visible) > 3:
        g = random_pdag(rng, max_nodes=5)
    par = random_params(g, uniform_cards(g), rng)
    ds = generate_all_patterns(g, par, one_do=one_do)
    assert not certify_infeasible(g, ds).infeasible
