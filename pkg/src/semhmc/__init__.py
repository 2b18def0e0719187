"""Unsupervised hierarchical multi-label text classification.

Pipeline: index a corpus, vectorize it, induce a concept taxonomy by
co-occurrence subsumption, derive one threshold rule per concept, then
classify items by forward chaining to a fixpoint.
"""

from semhmc.corpus import (
    CorpusError,
    Document,
    InvertedIndex,
    TokenizerConfig,
    build_index,
    document_frequency,
    parse_corpus,
    tokenize,
)
from semhmc.evalx import SimilarityReport, hierarchical_prf, taxonomy_similarity
from semhmc.hierarchize import (
    ROOT,
    HierarchizeParams,
    Taxonomy,
    build_taxonomy,
    cooccurrence_df,
    select_concepts,
    subsumption_edges,
)
from semhmc.model import Model, PipelineConfig, learn
from semhmc.realize import (
    ClassificationResult,
    FactBase,
    classify_item,
    classify_items,
    infer,
    most_specific,
    populate,
)
from semhmc.resolve import Rule, RuleSet, concept_threshold, generate_rules
from semhmc.vectorize import corpus_frequency, idf, tf, tfidf_vector

__all__ = [
    "ROOT",
    "ClassificationResult",
    "CorpusError",
    "Document",
    "FactBase",
    "HierarchizeParams",
    "InvertedIndex",
    "Model",
    "PipelineConfig",
    "Rule",
    "RuleSet",
    "SimilarityReport",
    "Taxonomy",
    "TokenizerConfig",
    "build_index",
    "build_taxonomy",
    "classify_item",
    "classify_items",
    "concept_threshold",
    "cooccurrence_df",
    "corpus_frequency",
    "document_frequency",
    "generate_rules",
    "hierarchical_prf",
    "idf",
    "infer",
    "learn",
    "most_specific",
    "parse_corpus",
    "populate",
    "select_concepts",
    "subsumption_edges",
    "taxonomy_similarity",
    "tf",
    "tfidf_vector",
    "tokenize",
]
