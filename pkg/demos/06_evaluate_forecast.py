"""Full circle: forecast from 12 years, then grade against year 13.

Run:  python demos/06_evaluate_forecast.py    (about half a minute)
"""

import tempfile
from pathlib import Path

from vocabtrend import (
    Hyperparams,
    LemmaMap,
    ai_score,
    build_frequency_matrix,
    build_report,
    default_rules,
    extract_exam_vocab,
    load_corpus,
    score_histogram,
    train_ensemble,
)
from vocabtrend.corpus import load_year_file
from vocabtrend.forecast import EnsembleSpec
from vocabtrend.synthetic import generate_corpus

with tempfile.TemporaryDirectory() as tmp:
    corpus_dir = Path(tmp) / "corpus"
    exam_file = Path(tmp) / "next_year.txt"
    info = generate_corpus(corpus_dir, n_years=12, seed=20231117, exam_file=exam_file)

    docs = load_corpus(corpus_dir, default_rules())
    matrix = build_frequency_matrix(docs, LemmaMap.identity())
    spec = EnsembleSpec(((3, 0.5), (5, 0.4), (7, 0.3)))
    results = train_ensemble(matrix, spec, Hyperparams(epochs=80, seed=11))
    table = ai_score(matrix.words, {n: results[n].prediction for n in spec.sizes}, spec)

    # The generator also wrote the realized "next year" exam.
    exam = load_year_file(exam_file, default_rules(), info.exam_year)
    actual = extract_exam_vocab(exam, LemmaMap.identity())
    report = build_report(table, actual, segment_width=10)

    print(f"words in interest: {report.interest_count}")
    print(f"realized exam vocabulary: {report.actual_count}")
    print(f"true positives: {report.true_positives}")
    print(f"accuracy: {report.true_positives}/{report.interest_count} = {100 * report.accuracy:.1f}%")
    print(f"intersection: {report.true_positives}/{report.actual_count} = {100 * report.intersection:.1f}%")

    print("\nappearance rate by score band (accumulated = this band and above):")
    for s in report.segments:
        marker = "(empty)" if s.empty else f"{s.appeared_count:2d}/{s.word_count:<2d} rate {s.appearance_rate:5.2f} accumulated {s.accumulated_rate:5.2f}"
        print(f"  [{s.lo:3d},{s.hi:3d}) {marker}")

    print("\nscore histogram (bin width 20):")
    for lo, hi, count in score_histogram(table, 20):
        print(f"  [{lo:5.1f},{hi:5.1f}) {'#' * count}")
