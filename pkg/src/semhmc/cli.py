"""Command-line front end.

Exit codes: 0 success, 1 user or data error, 2 I/O or system error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from urllib.parse import quote

from semhmc.corpus import CorpusError, InvertedIndex, TokenizerConfig, build_index, parse_corpus, read_stopwords
from semhmc.evalx import hierarchical_prf, taxonomy_similarity
from semhmc.hierarchize import Taxonomy
from semhmc.model import ConfigError, Model, PipelineConfig, learn
from semhmc.realize import classify_items, make_item
from semhmc.vectorize import corpus_frequency, format_vector, tfidf_vector

SKOS_BROADER = "http://www.w3.org/2004/02/skos/core#broader"
EXPORT_FORMATS = ("triples", "taxonomy-json")


class UserError(Exception):
    """Bad input or arguments; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _read_records(path: str) -> list[str]:
    text = _read_text(path)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _load_json(path: str, what: str):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise UserError(f"{path}: invalid {what} file ({exc.msg} at line {exc.lineno})") from None


def _config_overrides(args) -> dict:
    keys = ("min_token_len", "stopwords_path", "min_df", "max_df_frac",
            "subsumption_threshold", "rule_alpha")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def load_config(path: str | None, overrides: dict) -> tuple[PipelineConfig, set[str]]:
    """Config file merged with command-line overrides, plus the set of explicitly given keys."""
    data = {}
    if path is not None:
        data = _load_json(path, "config")
        if not isinstance(data, dict):
            raise UserError(f"{path}: config must be a JSON object")
        if data.get("stopwords_path") and not Path(data["stopwords_path"]).is_absolute():
            data["stopwords_path"] = str(Path(path).parent / data["stopwords_path"])
    data.update(overrides)
    return PipelineConfig.from_dict(data), set(data)


def _load_model(path: str) -> Model:
    try:
        return Model.from_dict(_load_json(path, "model"))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, UserError):
            raise
        raise UserError(f"{path}: invalid model: {exc}") from None


def cmd_index(args) -> int:
    config, _ = load_config(args.config, _config_overrides(args))
    stopwords = frozenset()
    if config.stopwords_path:
        stopwords = read_stopwords(_read_records(config.stopwords_path))
    tokenizer = TokenizerConfig(stopwords, config.min_token_len)
    corpus = parse_corpus(_read_records(args.corpus), tokenizer)
    index = build_index(corpus, workers=args.workers, tokenizer=tokenizer)
    _write_text(args.out, index.dumps())
    return 0


def cmd_learn(args) -> int:
    try:
        index = InvertedIndex.from_dict(_load_json(args.index, "index"))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, UserError):
            raise
        raise UserError(f"{args.index}: invalid index: {exc}") from None
    config, given = load_config(args.config, _config_overrides(args))
    if "min_token_len" in given and config.min_token_len != index.tokenizer.min_token_len:
        raise ConfigError(
            "min_token_len",
            f"min_token_len={config.min_token_len} conflicts with the index "
            f"(built with {index.tokenizer.min_token_len})",
        )
    model = learn(index, config)
    if not model.taxonomy.concepts:
        print("semhmc: warning: no term passed concept selection; "
              "model has only the root and zero rules", file=sys.stderr)
    _write_text(args.out, model.dumps())
    return 0


def cmd_classify(args) -> int:
    model = _load_model(args.model)
    docs = parse_corpus(_read_records(args.items), model.tokenizer, allow_empty=True)
    items = [make_item(d.id, d.text, model) for d in docs]
    results = classify_items(items, model, workers=args.workers)
    _write_text(args.out, "".join(
        json.dumps(r.to_record(), ensure_ascii=False, sort_keys=False) + "\n" for r in results
    ))
    return 0


def export_triples(taxonomy: Taxonomy) -> str:
    return "".join(
        f"<urn:shmc:concept:{quote(n, safe='')}> <{SKOS_BROADER}> "
        f"<urn:shmc:concept:{quote(b, safe='')}> .\n"
        for b, n in taxonomy.concept_edges()
    )


def cmd_export(args) -> int:
    if args.format not in EXPORT_FORMATS:
        raise UserError(f"unknown export format {args.format!r} (choose from {', '.join(EXPORT_FORMATS)})")
    model = _load_model(args.model)
    if args.format == "triples":
        text = export_triples(model.taxonomy)
    else:
        text = json.dumps(model.taxonomy.to_dict(), ensure_ascii=False, indent=1) + "\n"
    _write_text(args.out, text)
    return 0


def _label_records(path: str, what: str) -> dict[str, set[str]]:
    out: dict[str, set[str]] = {}
    for lineno, line in enumerate(_read_records(path), start=1):
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise UserError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(rec, dict) or not isinstance(rec.get("id"), str) \
                or not isinstance(rec.get("labels"), list) \
                or not all(isinstance(x, str) for x in rec["labels"]):
            raise UserError(f"{path}: line {lineno}: {what} record needs string 'id' and list 'labels'")
        if rec["id"] in out:
            raise UserError(f"{path}: line {lineno}: duplicate id {rec['id']!r}")
        out[rec["id"]] = set(rec["labels"])
    return out


def cmd_eval(args) -> int:
    gold = _label_records(args.gold, "gold")
    pred = _label_records(args.pred, "prediction")
    model = _load_model(args.model)
    print(hierarchical_prf(gold, pred, model.taxonomy).format())
    return 0


def cmd_compare(args) -> int:
    model = _load_model(args.model)
    try:
        reference = Taxonomy.from_dict(_load_json(args.reference, "taxonomy"))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, UserError):
            raise
        raise UserError(f"{args.reference}: invalid taxonomy: {exc}") from None
    r = taxonomy_similarity(model.taxonomy, reference)
    print(f"P={r.precision:.4f} R={r.recall:.4f} F1={r.f1:.4f}")
    return 0


def cmd_vectors(args) -> int:
    index = InvertedIndex.from_dict(_load_json(args.index, "index"))
    if args.doc is None:
        text = "".join(f"{t}\t{c}\n" for t, c in corpus_frequency(index).entries.items())
    else:
        if args.doc not in index.doc_lengths:
            raise UserError(f"unknown document id {args.doc!r}")
        text = format_vector(tfidf_vector(index, args.doc).entries)
    _write_text(None, text)
    return 0


def _add_tokenizer_opts(p):
    p.add_argument("--min-token-len", dest="min_token_len", type=int)
    p.add_argument("--stopwords", dest="stopwords_path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semhmc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("index", help="parse a corpus and write its inverted index")
    p.add_argument("corpus")
    p.add_argument("out")
    p.add_argument("--config")
    _add_tokenizer_opts(p)
    p.add_argument("--workers", type=int, default=0, help="0 = one per CPU")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("learn", help="learn taxonomy and rules from an index")
    p.add_argument("index")
    p.add_argument("out")
    p.add_argument("--config")
    p.add_argument("--min-token-len", dest="min_token_len", type=int)
    p.add_argument("--min-df", dest="min_df", type=int)
    p.add_argument("--max-df-frac", dest="max_df_frac", type=float)
    p.add_argument("--subsumption-threshold", dest="subsumption_threshold", type=float)
    p.add_argument("--rule-alpha", dest="rule_alpha", type=float)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("classify", help="label items with a learned model")
    p.add_argument("model")
    p.add_argument("items")
    p.add_argument("out")
    p.add_argument("--workers", type=int, default=0, help="0 = one per CPU")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("export", help="export the learned taxonomy")
    p.add_argument("model")
    p.add_argument("--format", default="triples", help="triples | taxonomy-json")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("eval", help="hierarchical precision/recall/F1 of predictions")
    p.add_argument("gold")
    p.add_argument("pred")
    p.add_argument("model")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="similarity of the learned taxonomy to a reference")
    p.add_argument("model")
    p.add_argument("reference")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("vectors", help="dump corpus frequencies or one document's TF-IDF vector")
    p.add_argument("index")
    p.add_argument("--doc")
    p.set_defaults(func=cmd_vectors)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"semhmc: error: {exc}", file=sys.stderr)
        return 2
    except (UserError, CorpusError, ConfigError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"semhmc: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
