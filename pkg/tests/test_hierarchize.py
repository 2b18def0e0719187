import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import jsonl, random_corpus
from oracles import all_pairs_subsumption, ancestors, is_acyclic, reachable, reduction_violations
from semhmc import (
    ROOT,
    HierarchizeParams,
    Taxonomy,
    build_index,
    build_taxonomy,
    cooccurrence_df,
    parse_corpus,
    select_concepts,
    subsumption_edges,
)
from semhmc.hierarchize import TaxonomyCycleError, transitive_reduction


def test_select_concepts_defaults(fix_a_index):
    assert select_concepts(fix_a_index) == {"apple", "fruit"}


def test_select_concepts_vacuous(fix_a_index):
    params = HierarchizeParams(min_df=1, max_df_frac=1)
    assert select_concepts(fix_a_index, params) == set(fix_a_index.vocabulary)


def test_select_concepts_unsatisfiable(fix_a_index):
    assert select_concepts(fix_a_index, HierarchizeParams(min_df=5)) == set()


@pytest.mark.parametrize(
    "kwargs",
    [{"min_df": 0}, {"max_df_frac": 0}, {"max_df_frac": 1.5},
     {"subsumption_threshold": 0.5}, {"subsumption_threshold": 1.01}],
)
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        HierarchizeParams(**kwargs)


def test_cooccurrence_df(fix_a_index):
    assert cooccurrence_df(fix_a_index, "apple", "fruit") == 2
    assert cooccurrence_df(fix_a_index, "apple", "banana") == 0
    for t in fix_a_index.vocabulary:
        assert cooccurrence_df(fix_a_index, t, t) == fix_a_index.df(t)


def test_subsumption_edges_fix_a(fix_a_index):
    assert subsumption_edges(fix_a_index, {"apple", "fruit"}, 0.8) == {("fruit", "apple")}


def test_equal_df_always_together_gives_no_edge():
    index = build_index(parse_corpus(jsonl([("a", "salt pepper"), ("b", "salt pepper"), ("c", "rice")])))
    assert subsumption_edges(index, {"salt", "pepper"}, 0.8) == set()


def test_disjoint_support_gives_no_edge(fix_a_index):
    assert subsumption_edges(fix_a_index, {"apple", "car"}, 0.8) == set()


def test_build_taxonomy_fix_a():
    tax = build_taxonomy({("fruit", "apple")}, {"apple", "fruit"})
    assert tax.concepts == {"apple", "fruit"}
    assert tax.edges == {(ROOT, "fruit"), ("fruit", "apple")}


def test_build_taxonomy_empty():
    tax = build_taxonomy(set(), set())
    assert tax.concepts == frozenset() and tax.edges == frozenset()
    assert tax.depth() == 0


def test_transitive_reduction_drops_shortcut():
    tax = build_taxonomy({("a", "b"), ("a", "c"), ("c", "b")}, {"a", "b", "c"})
    assert tax.edges == {(ROOT, "a"), ("a", "c"), ("c", "b")}


def test_cycle_is_an_internal_error():
    with pytest.raises(TaxonomyCycleError):
        build_taxonomy({("a", "b"), ("b", "a")}, {"a", "b"})


def test_multiple_parents_kept():
    tax = build_taxonomy({("x", "z"), ("y", "z")}, {"x", "y", "z"})
    assert tax.parents["z"] == ("x", "y")
    assert tax.ancestors("z") == {"x", "y"}


def test_taxonomy_dict_roundtrip():
    tax = build_taxonomy({("a", "b"), ("b", "c"), ("a", "d")}, {"a", "b", "c", "d", "e"})
    again = Taxonomy.from_dict(tax.to_dict())
    assert again == tax
    assert tax.depth() == 2
    assert ROOT not in tax.to_dict()["concepts"]


def test_taxonomy_from_dict_rejects_unknown_concept():
    with pytest.raises(ValueError):
        Taxonomy.from_dict({"concepts": ["a"], "edges": [["a", "b"]]})


@settings(max_examples=100, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=30))
def test_transitive_reduction_against_brute_force(pairs):
    # orient edges low -> high so the graph is a DAG
    edges = {(f"n{a}", f"n{b}") for a, b in pairs if a < b}
    nodes = {f"n{k}" for k in range(10)}
    reduced = transitive_reduction(nodes, edges)
    assert reduced <= edges
    assert not reduction_violations(reduced)
    for node in nodes:
        assert reachable(reduced, node) == reachable(edges, node)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000), st.sampled_from([0.6, 0.8, 0.9, 1.0]))
def test_subsumption_matches_all_pairs_oracle(seed, t_sub):
    docs = parse_corpus(jsonl(random_corpus(random.Random(seed), vocab_size=random.Random(seed).randint(10, 30))))
    index = build_index(docs)
    concepts = select_concepts(index, HierarchizeParams(min_df=1, max_df_frac=1))
    expected = all_pairs_subsumption([set(d.tokens) for d in docs], sorted(concepts), t_sub)
    raw = subsumption_edges(index, concepts, t_sub)
    assert raw == expected
    assert is_acyclic(raw)
    for b, n in raw:
        assert index.df(b) > index.df(n)
    tax = build_taxonomy(raw, concepts)
    assert is_acyclic(tax.edges)
    assert not reduction_violations(tax.edges)
    assert reachable(tax.edges, ROOT) == set(concepts)
    for c in concepts:
        assert tax.ancestors(c) == ancestors(tax.edges, c)


def test_build_taxonomy_order_independent():
    rng = random.Random(5)
    index = build_index(parse_corpus(jsonl(random_corpus(rng, n_docs=50, vocab_size=40))))
    concepts = select_concepts(index)
    raw = list(subsumption_edges(index, concepts))
    first = build_taxonomy(set(raw), concepts)
    for _ in range(5):
        rng.shuffle(raw)
        assert build_taxonomy(set(raw), set(sorted(concepts, reverse=True))) == first
