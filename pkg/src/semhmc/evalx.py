"""Hierarchical precision/recall/F1 and taxonomy similarity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Iterable, Mapping, Union

from semhmc.hierarchize import Taxonomy
from semhmc.realize import ClassificationResult


class UnknownConceptError(ValueError):
    def __init__(self, concept: str, where: str = ""):
        self.concept = concept
        super().__init__(f"unknown concept {concept!r}" + (f" in {where}" if where else ""))


@dataclass(frozen=True)
class SimilarityReport:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, overlap: int, n_pred: int, n_gold: int) -> "SimilarityReport":
        p = overlap / n_pred if n_pred else 0.0
        r = overlap / n_gold if n_gold else 0.0
        f = 2 * p * r / (p + r) if p + r else 0.0
        return cls(p, r, f)

    def format(self) -> str:
        return f"hP={self.precision:.4f} hR={self.recall:.4f} hF={self.f1:.4f}"


Predictions = Union[Mapping[str, AbstractSet[str]], Iterable[ClassificationResult]]


def _augment(labels: Iterable[str], taxonomy: Taxonomy, where: str) -> set[str]:
    out = set()
    for c in labels:
        if c not in taxonomy.concepts:
            raise UnknownConceptError(c, where)
        out.add(c)
        out |= taxonomy.ancestors(c)
    return out


def hierarchical_prf(
    gold: Mapping[str, AbstractSet[str]], pred: Predictions, taxonomy: Taxonomy
) -> SimilarityReport:
    """Micro-averaged hP/hR/hF over ancestor-augmented label sets.

    Items missing from one side count as having no labels there.
    """
    if not isinstance(pred, Mapping):
        pred = {r.item_id: r.all_labels for r in pred}
    overlap = n_pred = n_gold = 0
    for item_id in sorted(set(gold) | set(pred)):
        g = _augment(gold.get(item_id, ()), taxonomy, f"gold item {item_id!r}")
        p = _augment(pred.get(item_id, ()), taxonomy, f"predicted item {item_id!r}")
        overlap += len(g & p)
        n_pred += len(p)
        n_gold += len(g)
    return SimilarityReport.from_counts(overlap, n_pred, n_gold)


def taxonomy_similarity(learned: Taxonomy, reference: Taxonomy) -> SimilarityReport:
    """Precision/recall/F1 of learned (descendant, ancestor) pairs against the reference."""
    a_learned = learned.ancestor_pairs()
    a_ref = reference.ancestor_pairs()
    return SimilarityReport.from_counts(len(a_learned & a_ref), len(a_learned), len(a_ref))
