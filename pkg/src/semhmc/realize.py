"""Populate items into a fact base and classify them by forward chaining."""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass, field
from typing import AbstractSet, Iterable, Mapping, Sequence

from semhmc._parallel import map_chunks
from semhmc.corpus import CorpusError, Document, tokenize
from semhmc.hierarchize import Taxonomy
from semhmc.model import Model


class ContractViolation(ValueError):
    pass


@dataclass(frozen=True)
class FactBase:
    """Item weights (the evidence) plus derived ``(item_id, concept)`` label facts."""

    weights: Mapping[str, Mapping[str, float]]
    labels: frozenset[tuple[str, str]] = frozenset()
    rounds: int = 0

    def labels_of(self, item_id: str) -> set[str]:
        return {c for i, c in self.labels if i == item_id}


@dataclass(frozen=True)
class ClassificationResult:
    item_id: str
    all_labels: frozenset[str]
    most_specific: frozenset[str] = field(default_factory=frozenset)

    def to_record(self) -> dict:
        return {
            "id": self.item_id,
            "labels": sorted(self.all_labels),
            "most_specific": sorted(self.most_specific),
        }


def make_item(item_id: str, text: str, model: Model) -> Document:
    return Document(item_id, text, tuple(tokenize(text, model.tokenizer)))


def item_weights(tokens: Sequence[str], model: Model) -> dict[str, float]:
    """TF-IDF with the model's frozen idf; unknown tokens still count toward length."""
    if not tokens:
        return {}
    length = len(tokens)
    weights = {}
    for term, count in sorted(Counter(tokens).items()):
        term_idf = model.idf(term)
        if term_idf is not None:
            weights[term] = (count / length) * term_idf
    return weights


def populate(items: Iterable[Document], model: Model) -> FactBase:
    weights: dict[str, dict[str, float]] = {}
    for item in items:
        if item.id in weights:
            raise CorpusError(f"duplicate item id {item.id!r}")
        weights[item.id] = item_weights(item.tokens, model)
    return FactBase(weights)


def infer(factbase: FactBase, model: Model) -> FactBase:
    """Semi-naive forward chaining to the least fixpoint.

    Threshold rules fire once against the item weights; afterwards each
    round propagates only the labels that are new in the previous round to
    their broader concepts. ``rounds`` counts those propagation rounds,
    including the final one that derives nothing.
    """
    parents = {
        c: tuple(p for p in ps if p != model.taxonomy.root)
        for c, ps in model.taxonomy.parents.items()
    }
    rules_by_term: dict[str, list] = {}
    for rule in model.ruleset.rules:
        rules_by_term.setdefault(rule.evidence_term, []).append(rule)

    facts = set(factbase.labels)
    delta = set(factbase.labels)
    for item_id, weights in factbase.weights.items():
        for term, w in weights.items():
            for rule in rules_by_term.get(term, ()):
                if w >= rule.threshold:
                    delta.add((item_id, rule.concept))
    facts |= delta

    rounds = 0
    while delta:
        rounds += 1
        new = {(i, p) for i, c in delta for p in parents[c]}
        delta = new - facts
        facts |= delta
    return FactBase(factbase.weights, frozenset(facts), rounds)


def most_specific(all_labels: AbstractSet[str], taxonomy: Taxonomy) -> set[str]:
    """Minimal elements of an upward-closed label set."""
    labels = set(all_labels)
    covered: set[str] = set()
    for c in labels:
        if c not in taxonomy.concepts:
            raise ContractViolation(f"unknown concept {c!r}")
        ancestors = taxonomy.ancestors(c)
        missing = ancestors - labels
        if missing:
            raise ContractViolation(
                f"label set not upward-closed: {c!r} lacks ancestors {sorted(missing)}"
            )
        covered |= ancestors
    return labels - covered


def _results(fb: FactBase, model: Model) -> list[ClassificationResult]:
    by_item: dict[str, set[str]] = {i: set() for i in fb.weights}
    for i, c in fb.labels:
        by_item[i].add(c)
    return [
        ClassificationResult(i, frozenset(ls), frozenset(most_specific(ls, model.taxonomy)))
        for i, ls in sorted(by_item.items())
    ]


def classify_item(item: Document, model: Model) -> ClassificationResult:
    return _results(infer(populate([item], model), model), model)[0]


def _classify_chunk(model: Model, items: Sequence[Document]) -> list[ClassificationResult]:
    return _results(infer(populate(items, model), model), model)


def classify_items(
    items: Sequence[Document], model: Model, workers: int | None = 1
) -> list[ClassificationResult]:
    """Classify a batch; results are ordered by item id whatever ``workers`` is."""
    seen = set()
    for item in items:
        if item.id in seen:
            raise CorpusError(f"duplicate item id {item.id!r}")
        seen.add(item.id)
    if not items:
        return []
    parts = map_chunks(functools.partial(_classify_chunk, model), items, workers)
    return sorted((r for part in parts for r in part), key=lambda r: r.item_id)
