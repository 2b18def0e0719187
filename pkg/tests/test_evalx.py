import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semhmc import ROOT, ClassificationResult, Taxonomy, build_taxonomy, hierarchical_prf, taxonomy_similarity
from semhmc.evalx import UnknownConceptError


def tax(edges, concepts):
    return Taxonomy.from_dict({"concepts": sorted(concepts), "edges": [list(e) for e in edges]})


def test_hprf_worked_case(fix_a_model):
    r = hierarchical_prf({"x": {"apple"}}, {"x": {"fruit"}}, fix_a_model.taxonomy)
    assert (r.precision, r.recall) == (1.0, 0.5)
    assert r.f1 == pytest.approx(2 / 3)
    assert r.format() == "hP=1.0000 hR=0.5000 hF=0.6667"


def test_hprf_identity(fix_a_model):
    gold = {"x": {"apple"}, "y": {"fruit"}}
    r = hierarchical_prf(gold, gold, fix_a_model.taxonomy)
    assert (r.precision, r.recall, r.f1) == (1, 1, 1)


def test_hprf_empty_prediction(fix_a_model):
    r = hierarchical_prf({"x": {"apple"}}, {"x": set()}, fix_a_model.taxonomy)
    assert (r.precision, r.recall, r.f1) == (0, 0, 0)


def test_hprf_accepts_results(fix_a_model):
    pred = [ClassificationResult("x", frozenset({"fruit"}), frozenset({"fruit"}))]
    assert hierarchical_prf({"x": {"apple"}}, pred, fix_a_model.taxonomy).recall == 0.5


def test_hprf_unknown_concept(fix_a_model):
    with pytest.raises(UnknownConceptError) as err:
        hierarchical_prf({"x": {"pear"}}, {"x": {"fruit"}}, fix_a_model.taxonomy)
    assert err.value.concept == "pear"


def test_hprf_augmentation_idempotent(fix_a_model):
    t = fix_a_model.taxonomy
    pred = {"x": {"fruit"}, "y": {"apple"}}
    assert hierarchical_prf({"x": {"apple"}, "y": {"fruit"}}, pred, t) == \
        hierarchical_prf({"x": {"apple", "fruit"}, "y": {"fruit"}}, pred, t)


def test_taxonomy_similarity_worked_case():
    learned = tax({("fruit", "apple")}, {"fruit", "apple"})
    reference = tax({("fruit", "apple"), ("fruit", "banana")}, {"fruit", "apple", "banana"})
    r = taxonomy_similarity(learned, reference)
    assert (r.precision, r.recall) == (1.0, 0.5)
    assert r.f1 == pytest.approx(0.6667, abs=1e-4)


def test_taxonomy_similarity_identity_and_disjoint():
    a = tax({("x", "y"), ("y", "z")}, {"x", "y", "z"})
    r = taxonomy_similarity(a, a)
    assert (r.precision, r.recall, r.f1) == (1, 1, 1)
    b = tax({("p", "q")}, {"p", "q"})
    r = taxonomy_similarity(a, b)
    assert (r.precision, r.recall, r.f1) == (0, 0, 0)


def test_taxonomy_similarity_uses_entailed_order():
    # a shortcut edge present in only one taxonomy does not change the ancestor pairs
    reduced = tax({("x", "y"), ("y", "z")}, {"x", "y", "z"})
    redundant = tax({("x", "y"), ("y", "z"), ("x", "z")}, {"x", "y", "z"})
    assert taxonomy_similarity(reduced, redundant).f1 == 1.0


def _random_taxonomy(rng, names):
    edges = {(a, b) for a in names for b in names if a < b and rng.random() < 0.3}
    return build_taxonomy(edges, set(names))


@settings(max_examples=100)
@given(st.integers(0, 10**6))
def test_similarity_swap_symmetry(seed):
    rng = random.Random(seed)
    a = _random_taxonomy(rng, rng.sample("abcdefgh", rng.randint(0, 8)))
    b = _random_taxonomy(rng, rng.sample("abcdefgh", rng.randint(0, 8)))
    ab, ba = taxonomy_similarity(a, b), taxonomy_similarity(b, a)
    assert (ab.precision, ab.recall, ab.f1) == (ba.recall, ba.precision, ba.f1)
    for r in (ab, ba):
        assert 0 <= r.f1 <= 1
        assert ROOT not in {c for pair in a.ancestor_pairs() for c in pair}


@settings(max_examples=100)
@given(st.integers(0, 10**6))
def test_hprf_swap_symmetry(seed):
    rng = random.Random(seed)
    t = _random_taxonomy(rng, list("abcdef"))
    concepts = sorted(t.concepts)
    gold = {f"i{k}": set(rng.sample(concepts, rng.randint(0, 3))) for k in range(5)}
    pred = {f"i{k}": set(rng.sample(concepts, rng.randint(0, 3))) for k in range(5)}
    gp, pg = hierarchical_prf(gold, pred, t), hierarchical_prf(pred, gold, t)
    assert (gp.precision, gp.recall) == (pg.recall, pg.precision)
    assert gp.f1 == pytest.approx(pg.f1)
