"""Per-concept classification rules with TF-IDF thresholds."""

from __future__ import annotations

import math
from dataclasses import dataclass

from semhmc.corpus import InvertedIndex
from semhmc.hierarchize import Taxonomy
from semhmc.vectorize import UnknownTermError, idf_from_df


@dataclass(frozen=True)
class Rule:
    """``weight(item, evidence_term) >= threshold  =>  hasLabel(item, concept)``."""

    concept: str
    evidence_term: str
    threshold: float

    def __post_init__(self):
        if not math.isfinite(self.threshold) or self.threshold < 0:
            raise ValueError(f"rule threshold must be finite and >= 0, got {self.threshold!r}")

    def fires(self, weights: dict[str, float]) -> bool:
        w = weights.get(self.evidence_term)
        return w is not None and w >= self.threshold


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...]
    alpha: float

    def __post_init__(self):
        concepts = [r.concept for r in self.rules]
        if len(set(concepts)) != len(concepts):
            raise ValueError("duplicate concept in rule set")

    def __len__(self) -> int:
        return len(self.rules)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "rules": [
                {"concept": r.concept, "term": r.evidence_term, "threshold": r.threshold}
                for r in self.rules
            ],
        }

    @classmethod
    def from_dict(cls, data) -> "RuleSet":
        return cls(
            tuple(
                Rule(r["concept"], r["term"], float(r["threshold"])) for r in data["rules"]
            ),
            float(data["alpha"]),
        )


def _check_alpha(alpha: float) -> None:
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float)) or not (
        math.isfinite(alpha) and alpha > 0
    ):
        raise ValueError(f"rule_alpha out of range: {alpha!r} (need finite x > 0)")


def concept_threshold(index: InvertedIndex, concept: str, alpha: float = 0.5) -> float:
    """``alpha`` times the mean TF-IDF of ``concept`` over the documents containing it."""
    _check_alpha(alpha)
    plist = index.postings.get(concept)
    if not plist:
        raise UnknownTermError(f"unknown concept term {concept!r}")
    term_idf = idf_from_df(index.n_docs, len(plist))
    weights = [(c / index.doc_lengths[d]) * term_idf for d, c in plist]
    return alpha * (math.fsum(weights) / len(weights))


def generate_rules(index: InvertedIndex, taxonomy: Taxonomy, alpha: float = 0.5) -> RuleSet:
    _check_alpha(alpha)
    rules = tuple(
        Rule(c, c, concept_threshold(index, c, alpha)) for c in sorted(taxonomy.concepts)
    )
    return RuleSet(rules, alpha)
