"""Pipeline configuration and the serializable learned model."""

from __future__ import annotations

import dataclasses
import json
import math
import re
from dataclasses import dataclass
from typing import Mapping

from semhmc.corpus import InvertedIndex, TokenizerConfig
from semhmc.hierarchize import (
    HierarchizeParams,
    Taxonomy,
    build_taxonomy,
    select_concepts,
    subsumption_edges,
)
from semhmc.resolve import Rule, RuleSet, _check_alpha, generate_rules
from semhmc.vectorize import idf_from_df

MODEL_FORMAT = "semhmc-model/1"


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


@dataclass(frozen=True)
class PipelineConfig:
    min_token_len: int = 2
    stopwords_path: str | None = None
    min_df: int = 2
    max_df_frac: float = 0.8
    subsumption_threshold: float = 0.8
    rule_alpha: float = 0.5

    def __post_init__(self):
        for key in ("min_token_len", "min_df"):
            value = getattr(self, key)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(key, f"{key} out of range: {value!r} (need integer >= 1)")
        if self.stopwords_path is not None and not isinstance(self.stopwords_path, str):
            raise ConfigError("stopwords_path", "must be a string path or null")
        try:
            self.hierarchize_params()
        except ValueError as exc:
            key = str(exc).split(" ", 1)[0]
            raise ConfigError(key, str(exc)) from None
        try:
            _check_alpha(self.rule_alpha)
        except ValueError as exc:
            raise ConfigError("rule_alpha", str(exc)) from None

    def hierarchize_params(self) -> HierarchizeParams:
        return HierarchizeParams(self.min_df, self.max_df_frac, self.subsumption_threshold)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping) -> "PipelineConfig":
        if not isinstance(data, Mapping):
            raise ConfigError("<config>", "config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, f"unknown config key {key!r}")
        return cls(**data)

    def merged(self, overrides: Mapping) -> "PipelineConfig":
        return PipelineConfig.from_dict({**self.to_dict(), **overrides})


@dataclass(frozen=True)
class Model:
    """Frozen training statistics, taxonomy, rules and the config that produced them."""

    n_docs: int
    df: Mapping[str, int]
    taxonomy: Taxonomy
    ruleset: RuleSet
    config: PipelineConfig
    tokenizer: TokenizerConfig

    def idf(self, term: str) -> float | None:
        df = self.df.get(term)
        return None if df is None else idf_from_df(self.n_docs, df)

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "config": self.config.to_dict(),
            "tokenizer": self.tokenizer.to_dict(),
            "stats": {
                "n_docs": self.n_docs,
                "terms": {
                    t: {"df": self.df[t], "idf": _Fixed6(idf_from_df(self.n_docs, self.df[t]))}
                    for t in sorted(self.df)
                },
            },
            "taxonomy": self.taxonomy.to_dict(),
            "ruleset": {
                "alpha": self.ruleset.alpha,
                "rules": [
                    {"concept": r.concept, "term": r.evidence_term, "threshold": _Fixed6(r.threshold)}
                    for r in self.ruleset.rules
                ],
            },
        }

    def dumps(self) -> str:
        return _dumps_fixed(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "Model":
        if data.get("format") != MODEL_FORMAT:
            raise ValueError(f"not a model file (format {data.get('format')!r})")
        stats = data["stats"]
        taxonomy = Taxonomy.from_dict(data["taxonomy"])
        ruleset = RuleSet.from_dict(data["ruleset"])
        for rule in ruleset.rules:
            if rule.concept not in taxonomy.concepts:
                raise ValueError(f"rule for unknown concept {rule.concept!r}")
        return cls(
            n_docs=int(stats["n_docs"]),
            df={t: int(v["df"]) for t, v in stats["terms"].items()},
            taxonomy=taxonomy,
            ruleset=ruleset,
            config=PipelineConfig.from_dict(data["config"]),
            tokenizer=TokenizerConfig.from_dict(data["tokenizer"]),
        )

    @classmethod
    def loads(cls, text: str) -> "Model":
        return cls.from_dict(json.loads(text))


def round6(x: float) -> float:
    """The value a threshold takes after a trip through the model file."""
    return float(f"{x:.6f}")


def learn(index: InvertedIndex, config: PipelineConfig = PipelineConfig()) -> Model:
    """Hierarchize and resolve over ``index``.

    Thresholds are stored as their 6-decimal rendering so that an in-memory
    model classifies exactly like one reloaded from disk.
    """
    concepts = select_concepts(index, config.hierarchize_params())
    raw = subsumption_edges(index, concepts, config.subsumption_threshold)
    taxonomy = build_taxonomy(raw, concepts)
    exact = generate_rules(index, taxonomy, config.rule_alpha)
    ruleset = RuleSet(
        tuple(Rule(r.concept, r.evidence_term, round6(r.threshold)) for r in exact.rules),
        exact.alpha,
    )
    return Model(
        n_docs=index.n_docs,
        df={t: len(p) for t, p in index.postings.items()},
        taxonomy=taxonomy,
        ruleset=ruleset,
        config=dataclasses.replace(config, min_token_len=index.tokenizer.min_token_len),
        tokenizer=index.tokenizer,
    )


class _Fixed6:
    __slots__ = ("value",)

    def __init__(self, value: float):
        if not math.isfinite(value):
            raise ValueError(f"cannot render {value!r}")
        self.value = value


_FIXED_MARK = "\x00fixed6:"
_FIXED_RE = re.compile(r'"\\u0000fixed6:(-?[0-9]+\.[0-9]{6})"')


def _dumps_fixed(obj) -> str:
    """JSON with sorted keys where :class:`_Fixed6` values render as ``%.6f`` numbers."""

    def default(o):
        if isinstance(o, _Fixed6):
            return f"{_FIXED_MARK}{o.value:.6f}"
        raise TypeError(f"not JSON serializable: {type(o).__name__}")

    text = json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=1, default=default)
    return _FIXED_RE.sub(r"\1", text) + "\n"
