"""Per-item TF-IDF vectors and corpus-wide term frequencies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from semhmc.corpus import InvertedIndex


class UnknownTermError(KeyError):
    pass


class UnknownDocumentError(KeyError):
    pass


@dataclass(frozen=True)
class TermVector:
    doc_id: str
    entries: Mapping[str, float]


@dataclass(frozen=True)
class CorpusFrequencyVector:
    entries: Mapping[str, int]


def _check_doc(index: InvertedIndex, doc_id: str) -> int:
    try:
        return index.doc_lengths[doc_id]
    except KeyError:
        raise UnknownDocumentError(doc_id) from None


def tf(index: InvertedIndex, term: str, doc_id: str) -> float:
    """Occurrences of ``term`` in the document over its retained-token length."""
    length = _check_doc(index, doc_id)
    if length == 0:
        return 0.0
    return index.count(term, doc_id) / length


def idf_from_df(n_docs: int, df: int) -> float:
    return math.log(n_docs / df)


def idf(index: InvertedIndex, term: str) -> float:
    df = index.df(term)
    if df == 0:
        raise UnknownTermError(f"unknown term {term!r}")
    return idf_from_df(index.n_docs, df)


def tfidf_vector(index: InvertedIndex, doc_id: str) -> TermVector:
    length = _check_doc(index, doc_id)
    counts = index.doc_terms[doc_id]
    entries = {
        t: (c / length) * idf_from_df(index.n_docs, index.df(t))
        for t, c in counts.items()
    }
    return TermVector(doc_id, entries)


def corpus_frequency(index: InvertedIndex) -> CorpusFrequencyVector:
    return CorpusFrequencyVector(
        {t: sum(c for _, c in index.postings[t]) for t in index.vocabulary}
    )


def format_vector(entries: Mapping[str, float]) -> str:
    """Debug rendering: one ``term<TAB>weight`` line per term, lexicographic."""
    return "".join(f"{t}\t{entries[t]:.6f}\n" for t in sorted(entries))
