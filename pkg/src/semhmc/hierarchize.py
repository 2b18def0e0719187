"""Concept selection and broader/narrower taxonomy induction by subsumption."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import cached_property
from typing import AbstractSet, Iterable, Mapping

import numpy as np
from scipy import sparse

from semhmc.corpus import InvertedIndex

ROOT = "⊤"


class TaxonomyCycleError(RuntimeError):
    pass


@dataclass(frozen=True)
class HierarchizeParams:
    min_df: int = 2
    max_df_frac: float = 0.8
    subsumption_threshold: float = 0.8

    def __post_init__(self):
        if isinstance(self.min_df, bool) or not isinstance(self.min_df, int) or self.min_df < 1:
            raise ValueError(f"min_df out of range: {self.min_df!r} (need integer >= 1)")
        if not _is_real(self.max_df_frac) or not 0 < self.max_df_frac <= 1:
            raise ValueError(f"max_df_frac out of range: {self.max_df_frac!r} (need 0 < x <= 1)")
        t = self.subsumption_threshold
        if not _is_real(t) or not 0.5 < t <= 1:
            raise ValueError(f"subsumption_threshold out of range: {t!r} (need 0.5 < x <= 1)")


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


@dataclass(frozen=True)
class Taxonomy:
    """Concept DAG. ``edges`` holds ``(broader, narrower)`` pairs, including
    the edges from the virtual :data:`ROOT` to every parentless concept."""

    concepts: frozenset[str]
    edges: frozenset[tuple[str, str]]
    root: str = ROOT

    @cached_property
    def parents(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {c: [] for c in self.concepts}
        for b, n in self.edges:
            out.setdefault(n, []).append(b)
        return {c: tuple(sorted(ps)) for c, ps in out.items()}

    @cached_property
    def children(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {c: [] for c in self.concepts}
        out[self.root] = []
        for b, n in self.edges:
            out.setdefault(b, []).append(n)
        return {c: tuple(sorted(ns)) for c, ns in out.items()}

    @cached_property
    def _ancestors(self) -> dict[str, frozenset[str]]:
        memo: dict[str, frozenset[str]] = {}
        for c in _topological(self.concepts, self.edges - self._root_edges):
            acc: set[str] = set()
            for p in self.parents.get(c, ()):
                if p != self.root:
                    acc.add(p)
                    acc |= memo[p]
            memo[c] = frozenset(acc)
        return memo

    @cached_property
    def _root_edges(self) -> frozenset[tuple[str, str]]:
        return frozenset(e for e in self.edges if e[0] == self.root)

    def ancestors(self, concept: str) -> frozenset[str]:
        """Strict ancestors of ``concept``, never including the root."""
        return self._ancestors[concept]

    def ancestor_pairs(self) -> set[tuple[str, str]]:
        return {(c, a) for c in self.concepts for a in self._ancestors[c]}

    def concept_edges(self) -> list[tuple[str, str]]:
        """Edges between real concepts, sorted by (narrower, broader)."""
        return sorted((e for e in self.edges if e[0] != self.root), key=lambda e: (e[1], e[0]))

    def depth(self) -> int:
        """Longest chain of concept edges below the root (0 if no edges)."""
        longest: dict[str, int] = {}
        for c in _topological(self.concepts, self.edges - self._root_edges):
            ps = [p for p in self.parents.get(c, ()) if p != self.root]
            longest[c] = max((longest[p] + 1 for p in ps), default=0)
        return max(longest.values(), default=0)

    def to_dict(self) -> dict:
        return {
            "concepts": sorted(self.concepts),
            "edges": [[b, n] for b, n in sorted(e for e in self.edges if e[0] != self.root)],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Taxonomy":
        """Rebuild from :meth:`to_dict` output, re-attaching parentless concepts to the root."""
        concepts = frozenset(data["concepts"])
        if ROOT in concepts:
            raise ValueError(f"{ROOT!r} is reserved and cannot be a concept")
        edges = set()
        for pair in data["edges"]:
            b, n = pair
            if b not in concepts or n not in concepts:
                raise ValueError(f"edge ({b!r}, {n!r}) references an unknown concept")
            edges.add((b, n))
        _topological(concepts, edges)
        return cls(concepts, frozenset(edges | _root_attachments(concepts, edges)))


def _root_attachments(concepts: Iterable[str], edges: AbstractSet[tuple[str, str]]):
    has_parent = {n for _, n in edges}
    return {(ROOT, c) for c in concepts if c not in has_parent}


def _topological(nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> list[str]:
    """Kahn's algorithm with lexicographic tie-breaking; raises on a cycle."""
    nodes = set(nodes)
    succ: dict[str, list[str]] = {n: [] for n in nodes}
    indeg = dict.fromkeys(nodes, 0)
    for b, n in edges:
        succ[b].append(n)
        indeg[n] += 1
    heap = [n for n, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        node = heapq.heappop(heap)
        order.append(node)
        for n in succ[node]:
            indeg[n] -= 1
            if indeg[n] == 0:
                heapq.heappush(heap, n)
    if len(order) != len(nodes):
        stuck = sorted(n for n, d in indeg.items() if d > 0)
        raise TaxonomyCycleError(f"cycle among concepts {stuck[:10]}")
    return order


def select_concepts(index: InvertedIndex, params: HierarchizeParams = HierarchizeParams()) -> set[str]:
    """Terms whose document frequency lies in ``[min_df, max_df_frac * N]``."""
    n = index.n_docs
    return {
        t
        for t, plist in index.postings.items()
        if len(plist) >= params.min_df and len(plist) / n <= params.max_df_frac
    }


def cooccurrence_df(index: InvertedIndex, t1: str, t2: str) -> int:
    """Number of documents containing both terms (sorted postings intersection)."""
    a = index.postings.get(t1, ())
    b = index.postings.get(t2, ())
    i = j = hits = 0
    while i < len(a) and j < len(b):
        da, db = a[i][0], b[j][0]
        if da == db:
            hits += 1
            i += 1
            j += 1
        elif da < db:
            i += 1
        else:
            j += 1
    return hits


def cooccurrence_matrix(index: InvertedIndex, concepts: list[str]) -> sparse.coo_matrix:
    """Sparse ``co[i, j]`` = documents containing both ``concepts[i]`` and ``concepts[j]``."""
    doc_pos = {d: k for k, d in enumerate(sorted(index.doc_lengths))}
    rows, cols = [], []
    for j, term in enumerate(concepts):
        for doc_id, _ in index.postings[term]:
            rows.append(doc_pos[doc_id])
            cols.append(j)
    incidence = sparse.csr_matrix(
        (np.ones(len(rows), dtype=np.int64), (rows, cols)),
        shape=(len(doc_pos), len(concepts)),
    )
    return (incidence.T @ incidence).tocoo()


def subsumption_edges(
    index: InvertedIndex, concepts: AbstractSet[str], t_sub: float = 0.8
) -> set[tuple[str, str]]:
    """Raw ``(broader, narrower)`` edges.

    ``x`` is broader than ``y`` iff ``P(x|y) >= t_sub`` and ``P(y|x) < P(x|y)``
    with ``P(x|y) = co(x, y) / df(y)``. Only co-occurring pairs can qualify
    since ``t_sub > 0``.
    """
    terms = sorted(concepts)
    if len(terms) < 2:
        return set()
    co = cooccurrence_matrix(index, terms)
    df = np.array([index.df(t) for t in terms], dtype=np.float64)
    x, y, both = co.row, co.col, co.data.astype(np.float64)
    p_x_given_y = both / df[y]
    p_y_given_x = both / df[x]
    keep = (x != y) & (p_x_given_y >= t_sub) & (p_y_given_x < p_x_given_y)
    return {(terms[i], terms[j]) for i, j in zip(x[keep].tolist(), y[keep].tolist())}


def transitive_reduction(nodes: Iterable[str], edges: AbstractSet[tuple[str, str]]) -> set[tuple[str, str]]:
    """Drop every edge ``(b, n)`` for which another path ``b -> ... -> n`` exists."""
    order = _topological(nodes, edges)
    bit = {node: 1 << k for k, node in enumerate(order)}
    succ: dict[str, list[str]] = {node: [] for node in order}
    for b, n in edges:
        succ[b].append(n)
    # reach[v]: bitset of nodes strictly below v
    reach: dict[str, int] = {}
    kept = set()
    for node in reversed(order):
        via_children = 0
        below = 0
        for child in succ[node]:
            via_children |= reach[child]
            below |= bit[child] | reach[child]
        reach[node] = below
        kept.update((node, child) for child in succ[node] if not via_children & bit[child])
    return kept


def build_taxonomy(edges: AbstractSet[tuple[str, str]], concepts: AbstractSet[str]) -> Taxonomy:
    concepts = frozenset(concepts)
    for b, n in edges:
        if b not in concepts or n not in concepts:
            raise ValueError(f"edge ({b!r}, {n!r}) references a non-concept")
    reduced = transitive_reduction(concepts, edges)
    return Taxonomy(concepts, frozenset(reduced | _root_attachments(concepts, reduced)))
