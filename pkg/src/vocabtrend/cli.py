"""Command-line pipeline over on-disk CSV handoffs.

    vocabtrend ingest    --config run.cfg
    vocabtrend correlate --config run.cfg
    vocabtrend train     --config run.cfg [--jobs K] [--seed S]
    vocabtrend evaluate  --config run.cfg --exam 2023.txt
    vocabtrend report    --config run.cfg

Each stage validates its whole configuration before writing anything, so a
bad config never leaves partial artifacts. Exit codes are stable: 0 on
success, 2 for input/config errors, 3 for numeric failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from .cooccurrence import correlation_matrix, occurrence_matrix, write_correlation_csv
from .corpus import (
    RemovalRuleSet,
    default_rules,
    load_corpus,
    load_removal_rules,
    load_year_file,
)
from .errors import InputError, NumericError, VocabTrendError
from .evaluation import (
    Segment,
    build_report,
    extract_exam_vocab,
    score_histogram,
    write_histogram_csv,
    write_report_json,
    write_segments_csv,
    write_word_scores_csv,
)
from .forecast import (
    DEFAULT_ENSEMBLE,
    EnsembleSpec,
    ai_score,
    load_ensemble_spec,
    read_scores_csv,
    train_ensemble,
    write_scores_csv,
)
from .lexicon import (
    LemmaMap,
    apply_screening,
    build_frequency_matrix,
    load_lemma_map,
    load_screen_list,
    read_frequency_csv,
    write_frequency_csv,
)
from .neuralnet import Hyperparams, save_checkpoint

logger = logging.getLogger(__name__)

FREQUENCY_CSV = "frequency.csv"
CORRELATION_CSV = "correlation.csv"
SCORES_CSV = "scores.csv"
LOSS_TRACE_CSV = "loss_trace.csv"
REPORT_JSON = "report.json"
WORD_SCORES_CSV = "word_scores.csv"
HISTOGRAM_CSV = "histogram.csv"
SEGMENTS_CSV = "segments.csv"

_YEAR_STEM = re.compile(r"^(\d{4})$")

_HYPER_KEYS = {
    "hidden_size": int,
    "dense1": int,
    "dense2": int,
    "dropout": float,
    "learning_rate": float,
    "beta1": float,
    "beta2": float,
    "epsilon": float,
    "epochs": int,
    "batch_size": int,
    "seed": int,
}
_PATH_KEYS = ("corpus_dir", "output_dir", "rules_file", "lemma_map", "screen_list", "ensemble")
_OTHER_KEYS = {"segment_width": int, "histogram_bin_width": float}


@dataclass
class RunConfig:
    corpus_dir: Path
    output_dir: Path
    rules_file: Path | None
    lemma_map_file: Path | None
    screen_list_file: Path | None
    ensemble_file: Path | None
    hyper: Hyperparams
    segment_width: int = 10
    histogram_bin_width: float = 10.0


def _parse_config_file(path: Path) -> dict[str, str]:
    try:
        raw = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    values: dict[str, str] = {}
    for lineno, line in enumerate(raw.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise InputError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in set(_PATH_KEYS) | set(_HYPER_KEYS) | set(_OTHER_KEYS):
            raise InputError(f"{path}:{lineno}: unknown config key '{key}'")
        values[key] = value
    return values


def load_config(config_path: str | Path, seed_override: int | None = None) -> RunConfig:
    """Parse and fully validate a run configuration.

    Every referenced input path must exist; numeric fields must be in
    range. Nothing is written here.
    """
    path = Path(config_path)
    values = _parse_config_file(path)

    for key in ("corpus_dir", "output_dir"):
        if key not in values:
            raise InputError(f"{path}: missing required config key '{key}'")

    def cast(key: str, caster, default):
        if key not in values:
            return default
        try:
            return caster(values[key])
        except ValueError as exc:
            raise InputError(f"{path}: bad value for '{key}': {values[key]}") from exc

    base = path.parent

    def as_path(key: str) -> Path | None:
        if key not in values or not values[key]:
            return None
        p = Path(values[key])
        return p if p.is_absolute() else base / p

    hyper_kwargs = {}
    for key, caster in _HYPER_KEYS.items():
        if key in values:
            hyper_kwargs[key] = cast(key, caster, None)
    if seed_override is not None:
        hyper_kwargs["seed"] = seed_override
    hyper = Hyperparams(**hyper_kwargs)

    config = RunConfig(
        corpus_dir=as_path("corpus_dir"),
        output_dir=as_path("output_dir"),
        rules_file=as_path("rules_file"),
        lemma_map_file=as_path("lemma_map"),
        screen_list_file=as_path("screen_list"),
        ensemble_file=as_path("ensemble"),
        hyper=hyper,
        segment_width=cast("segment_width", int, 10),
        histogram_bin_width=cast("histogram_bin_width", float, 10.0),
    )

    if not config.corpus_dir.is_dir():
        raise InputError(f"corpus_dir does not exist: {config.corpus_dir}")
    for name, p in (
        ("rules_file", config.rules_file),
        ("lemma_map", config.lemma_map_file),
        ("screen_list", config.screen_list_file),
        ("ensemble", config.ensemble_file),
    ):
        if p is not None and not p.is_file():
            raise InputError(f"{name} does not exist: {p}")
    if config.segment_width <= 0 or 100 % config.segment_width != 0:
        raise InputError(f"segment_width {config.segment_width} must divide 100")
    if config.histogram_bin_width <= 0:
        raise InputError("histogram_bin_width must be positive")
    return config


def _rules(config: RunConfig) -> RemovalRuleSet:
    if config.rules_file is not None:
        return load_removal_rules(config.rules_file)
    return default_rules()


def _lemma_map(config: RunConfig) -> LemmaMap:
    if config.lemma_map_file is not None:
        return load_lemma_map(config.lemma_map_file)
    return LemmaMap.identity()


def _ensemble(config: RunConfig) -> EnsembleSpec:
    if config.ensemble_file is not None:
        return load_ensemble_spec(config.ensemble_file)
    return DEFAULT_ENSEMBLE


def _require(path: Path, hint: str) -> Path:
    if not path.is_file():
        raise InputError(f"{path} not found; run '{hint}' first")
    return path


def cmd_ingest(config: RunConfig) -> int:
    rules = _rules(config)
    lemma_map = _lemma_map(config)
    docs = load_corpus(config.corpus_dir, rules)
    matrix = build_frequency_matrix(docs, lemma_map)
    if config.screen_list_file is not None:
        matrix = apply_screening(matrix, load_screen_list(config.screen_list_file))

    config.output_dir.mkdir(parents=True, exist_ok=True)
    out = config.output_dir / FREQUENCY_CSV
    write_frequency_csv(matrix, out)

    total_tokens = sum(len(d.tokens) for d in docs)
    print(f"years: {matrix.years[0]}..{matrix.years[-1]} ({len(matrix.years)})")
    print(f"tokens: {total_tokens}")
    print(f"vocabulary: {len(matrix.words)} lemmas")
    print(f"wrote {out}")
    return 0


def cmd_correlate(config: RunConfig) -> int:
    matrix = read_frequency_csv(_require(config.output_dir / FREQUENCY_CSV, "ingest"))
    rules = _rules(config)
    lemma_map = _lemma_map(config)
    docs = load_corpus(config.corpus_dir, rules)
    sentences = [s for doc in docs for s in doc.sentences]
    occ = occurrence_matrix(sentences, matrix.words, lemma_map)
    corr = correlation_matrix(occ)
    out = config.output_dir / CORRELATION_CSV
    write_correlation_csv(corr, out)
    print(f"correlated {len(corr.words)} words over {occ.sentences} sentences")
    print(f"wrote {out}")
    return 0


def cmd_train_predict(config: RunConfig, jobs: int | None = None) -> int:
    matrix = read_frequency_csv(_require(config.output_dir / FREQUENCY_CSV, "ingest"))
    spec = _ensemble(config)
    results = train_ensemble(matrix, spec, config.hyper, jobs)

    for size in spec.sizes:
        result = results[size]
        checkpoint = config.output_dir / f"model_w{size}.npz"
        save_checkpoint(
            checkpoint, result.params, result.state, config.hyper.with_seed(config.hyper.seed + size)
        )
        final = result.epoch_losses[-1] if result.epoch_losses else float("nan")
        print(f"window {size}: trained on {len(result.epoch_losses)} epochs, final loss {final:.6f}")

    trace_lines = ["window,epoch,loss"]
    for size in spec.sizes:
        for epoch, loss in enumerate(results[size].epoch_losses):
            trace_lines.append(f"{size},{epoch},{loss:.12g}")
    (config.output_dir / LOSS_TRACE_CSV).write_text(
        "\n".join(trace_lines) + "\n", encoding="utf-8", newline=""
    )

    table = ai_score(matrix.words, {n: results[n].prediction for n in spec.sizes}, spec)
    out = config.output_dir / SCORES_CSV
    write_scores_csv(table, out)
    print(f"wrote {out}")
    return 0


def cmd_evaluate(config: RunConfig, exam_file: str | Path) -> int:
    scores = read_scores_csv(_require(config.output_dir / SCORES_CSV, "train"))
    exam_path = Path(exam_file)
    if not exam_path.is_file():
        raise InputError(f"exam file does not exist: {exam_path}")
    rules = _rules(config)
    lemma_map = _lemma_map(config)
    stem_match = _YEAR_STEM.match(exam_path.stem)
    year = int(stem_match.group(1)) if stem_match else 0
    exam = load_year_file(exam_path, rules, year)
    actual = extract_exam_vocab(exam, lemma_map)
    report = build_report(scores, actual, config.segment_width)

    write_report_json(report, config.output_dir / REPORT_JSON)
    write_word_scores_csv(scores, actual, config.output_dir / WORD_SCORES_CSV)

    print(
        f"true positives: {report.true_positives}  "
        f"accuracy: {report.true_positives}/{report.interest_count} = {100 * report.accuracy:.2f}%  "
        f"intersection: {report.true_positives}/{report.actual_count} = {100 * report.intersection:.2f}%"
    )
    print(f"wrote {config.output_dir / REPORT_JSON}")
    print(f"wrote {config.output_dir / WORD_SCORES_CSV}")
    return 0


def cmd_report(config: RunConfig) -> int:
    scores = read_scores_csv(_require(config.output_dir / SCORES_CSV, "train"))
    bins = score_histogram(scores, config.histogram_bin_width)
    out = config.output_dir / HISTOGRAM_CSV
    write_histogram_csv(bins, out)
    print(f"wrote {out}")

    report_path = config.output_dir / REPORT_JSON
    if report_path.is_file():
        data = json.loads(report_path.read_text(encoding="utf-8"))
        segments = [Segment(**s) for s in data["segments"]]
        seg_out = config.output_dir / SEGMENTS_CSV
        write_segments_csv(segments, seg_out)
        print(f"wrote {seg_out}")
    else:
        print("no report.json yet; run 'evaluate' to get segment data")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vocabtrend",
        description="Forecast next-year word appearance in a yearly exam corpus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="key = value run configuration file")
        return p

    add("ingest", "build the word-by-year frequency matrix CSV")
    add("correlate", "compute the sentence co-occurrence correlation matrix")
    train = add("train", "train the window ensemble and write scores")
    train.add_argument("--jobs", type=int, default=None, help="concurrent trainings")
    train.add_argument("--seed", type=int, default=None, help="override the configured seed")
    evaluate = add("evaluate", "compare scores against a realized exam")
    evaluate.add_argument("--exam", required=True, help="plain-text exam file")
    add("report", "emit histogram and segment CSVs for plotting")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "train":
            config = load_config(args.config, seed_override=args.seed)
            return cmd_train_predict(config, args.jobs)
        config = load_config(args.config)
        if args.command == "ingest":
            return cmd_ingest(config)
        if args.command == "correlate":
            return cmd_correlate(config)
        if args.command == "evaluate":
            return cmd_evaluate(config, args.exam)
        if args.command == "report":
            return cmd_report(config)
        raise AssertionError(f"unhandled command {args.command}")
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VocabTrendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
