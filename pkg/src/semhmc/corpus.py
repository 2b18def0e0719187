"""Corpus parsing, tokenization and the inverted index."""

from __future__ import annotations

import bisect
import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from semhmc._parallel import map_chunks

INDEX_FORMAT = "semhmc-index/1"

# Maximal runs of characters for which str.isalnum() holds.
_TOKEN_RE = re.compile(r"[^\W_]+")


class CorpusError(ValueError):
    """Malformed corpus or item input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class TokenizerConfig:
    stopwords: frozenset[str] = frozenset()
    min_token_len: int = 2

    def __post_init__(self):
        if isinstance(self.min_token_len, bool) or not isinstance(self.min_token_len, int):
            raise ValueError("min_token_len must be an integer")
        if self.min_token_len < 1:
            raise ValueError(f"min_token_len must be >= 1, got {self.min_token_len}")
        object.__setattr__(
            self, "stopwords", frozenset(normalize(w) for w in self.stopwords)
        )

    def to_dict(self) -> dict:
        return {"min_token_len": self.min_token_len, "stopwords": sorted(self.stopwords)}

    @classmethod
    def from_dict(cls, data: Mapping) -> "TokenizerConfig":
        return cls(
            stopwords=frozenset(data.get("stopwords", ())),
            min_token_len=data.get("min_token_len", 2),
        )


def normalize(text: str) -> str:
    return unicodedata.normalize("NFC", unicodedata.normalize("NFC", text).lower())


def tokenize(text: str, config: TokenizerConfig = TokenizerConfig()) -> list[str]:
    """NFC-normalize, lowercase and split ``text`` into alphanumeric runs.

    Tokens shorter than ``config.min_token_len`` characters or listed in
    ``config.stopwords`` are dropped.

    >>> tokenize("Apple pie!")
    ['apple', 'pie']
    """
    return [
        tok
        for tok in _TOKEN_RE.findall(normalize(text))
        if len(tok) >= config.min_token_len and tok not in config.stopwords
    ]


def read_stopwords(lines: Iterable[str]) -> frozenset[str]:
    """One stopword per line; blank lines and ``#`` comments are skipped."""
    words = set()
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(normalize(line))
    return frozenset(words)


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    tokens: tuple[str, ...] = ()


def _parse_record(line: str, lineno: int) -> tuple[str, str]:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"invalid JSON ({exc.msg})", lineno) from None
    if not isinstance(record, dict):
        raise CorpusError("record must be a JSON object", lineno)
    for key in ("id", "text"):
        if key not in record:
            raise CorpusError(f"missing field {key!r}", lineno)
        if not isinstance(record[key], str):
            raise CorpusError(f"field {key!r} must be a string", lineno)
    if not record["id"]:
        raise CorpusError("empty id", lineno)
    return record["id"], record["text"]


def parse_corpus(
    stream: Iterable[str],
    config: TokenizerConfig = TokenizerConfig(),
    allow_empty: bool = False,
) -> list[Document]:
    """Parse line-delimited JSON records with ``id`` and ``text`` fields.

    Input order is preserved. Raises :class:`CorpusError` on a malformed
    line, a duplicate id, or (unless ``allow_empty``) an empty input.
    """
    docs = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            raise CorpusError("blank line", lineno)
        doc_id, text = _parse_record(line, lineno)
        if doc_id in seen:
            raise CorpusError(
                f"duplicate id {doc_id!r} (first seen on line {seen[doc_id]})", lineno
            )
        seen[doc_id] = lineno
        docs.append(Document(doc_id, text, tuple(tokenize(text, config))))
    if not docs and not allow_empty:
        raise CorpusError("empty corpus")
    return docs


@dataclass(frozen=True)
class InvertedIndex:
    """Term postings, per-document lengths and the tokenizer that produced them.

    ``postings[t]`` is a tuple of ``(doc_id, count)`` sorted by doc id.
    """

    n_docs: int
    postings: Mapping[str, tuple[tuple[str, int], ...]]
    doc_lengths: Mapping[str, int]
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)

    @property
    def vocabulary(self) -> list[str]:
        return sorted(self.postings)

    @cached_property
    def _postings_ids(self) -> dict[str, list[str]]:
        return {t: [d for d, _ in plist] for t, plist in self.postings.items()}

    @cached_property
    def doc_terms(self) -> dict[str, dict[str, int]]:
        """Forward view: doc id -> {term: count}, terms in lexicographic order."""
        fwd: dict[str, dict[str, int]] = {d: {} for d in sorted(self.doc_lengths)}
        for term in self.vocabulary:
            for doc_id, count in self.postings[term]:
                fwd[doc_id][term] = count
        return fwd

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def count(self, term: str, doc_id: str) -> int:
        ids = self._postings_ids.get(term)
        if not ids:
            return 0
        i = bisect.bisect_left(ids, doc_id)
        if i < len(ids) and ids[i] == doc_id:
            return self.postings[term][i][1]
        return 0

    def to_dict(self) -> dict:
        return {
            "format": INDEX_FORMAT,
            "n_docs": self.n_docs,
            "doc_lengths": dict(sorted(self.doc_lengths.items())),
            "postings": {
                t: [[d, c] for d, c in self.postings[t]] for t in self.vocabulary
            },
            "tokenizer": self.tokenizer.to_dict(),
        }

    def dumps(self) -> str:
        return json.dumps(
            self.to_dict(), sort_keys=True, ensure_ascii=False, separators=(",", ":")
        ) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> "InvertedIndex":
        if data.get("format") != INDEX_FORMAT:
            raise ValueError(f"not an index file (format {data.get('format')!r})")
        postings = {
            t: tuple((str(d), int(c)) for d, c in plist)
            for t, plist in data["postings"].items()
        }
        doc_lengths = {str(d): int(n) for d, n in data["doc_lengths"].items()}
        index = cls(
            int(data["n_docs"]),
            postings,
            doc_lengths,
            TokenizerConfig.from_dict(data.get("tokenizer", {})),
        )
        index.validate()
        return index

    @classmethod
    def loads(cls, text: str) -> "InvertedIndex":
        return cls.from_dict(json.loads(text))

    def validate(self) -> None:
        """Check structural invariants; raise ValueError on the first violation."""
        if self.n_docs != len(self.doc_lengths):
            raise ValueError("n_docs does not match doc_lengths")
        totals = dict.fromkeys(self.doc_lengths, 0)
        for term, plist in self.postings.items():
            if not 1 <= len(plist) <= self.n_docs:
                raise ValueError(f"df out of range for {term!r}")
            ids = [d for d, _ in plist]
            if ids != sorted(set(ids)):
                raise ValueError(f"postings for {term!r} not sorted or duplicated")
            for doc_id, count in plist:
                if count < 1 or doc_id not in totals:
                    raise ValueError(f"bad posting ({doc_id!r}, {count}) for {term!r}")
                totals[doc_id] += count
        if totals != dict(self.doc_lengths):
            raise ValueError("posting counts do not sum to doc_lengths")


def _count_chunk(docs: Sequence[Document]) -> list[tuple[str, list[tuple[str, int]]]]:
    return [(d.id, sorted(Counter(d.tokens).items())) for d in docs]


def build_index(
    corpus: Sequence[Document],
    workers: int | None = 1,
    tokenizer: TokenizerConfig | None = None,
) -> InvertedIndex:
    """Build the inverted index, counting documents in parallel chunks.

    Per-document counts are merged in doc-id order, so the result does not
    depend on ``workers``.
    """
    if not corpus:
        raise CorpusError("empty corpus")
    counted = [row for part in map_chunks(_count_chunk, corpus, workers) for row in part]
    counted.sort(key=lambda row: row[0])
    postings: dict[str, list[tuple[str, int]]] = {}
    doc_lengths: dict[str, int] = {}
    for doc_id, counts in counted:
        if doc_id in doc_lengths:
            raise CorpusError(f"duplicate id {doc_id!r}")
        doc_lengths[doc_id] = sum(c for _, c in counts)
        for term, c in counts:
            postings.setdefault(term, []).append((doc_id, c))
    return InvertedIndex(
        n_docs=len(doc_lengths),
        postings={t: tuple(postings[t]) for t in sorted(postings)},
        doc_lengths=doc_lengths,
        tokenizer=tokenizer or TokenizerConfig(),
    )


def document_frequency(index: InvertedIndex, term: str) -> int:
    return index.df(term)
