"""Score a prediction table against the vocabulary of a realized exam.

Metric definitions:
  accuracy     = true positives / number of words in interest
  intersection = true positives / number of distinct exam lemmas
Both denominators are carried explicitly in the report so the arithmetic
can always be re-checked.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

from .corpus import YearDocument
from .errors import InputError
from .forecast import AiScoreTable
from .lexicon import LemmaMap, lemmatize


@dataclass
class Segment:
    """One score band: [lo, hi) except the top band, which includes 100."""

    lo: int
    hi: int
    word_count: int
    appeared_count: int
    appearance_rate: float
    accumulated_rate: float
    empty: bool


@dataclass
class EvalReport:
    interest_count: int
    actual_count: int
    true_positives: int
    accuracy: float
    intersection: float
    segments: list[Segment]

    def to_dict(self) -> dict:
        return asdict(self)


def extract_exam_vocab(exam: YearDocument, lemma_map: LemmaMap) -> set[str]:
    """Distinct lemmas occurring in the exam document."""
    return {lemmatize(t, lemma_map) for t in exam.tokens}


def prediction_metrics(
    interest: set[str], actual: set[str]
) -> tuple[int, float, float]:
    """(true positives, accuracy, intersection) for two lemma sets."""
    if not interest:
        raise InputError("the set of words in interest is empty")
    if not actual:
        raise InputError("the realized exam vocabulary is empty")
    tp = len(interest & actual)
    return tp, tp / len(interest), tp / len(actual)


def segment_analysis(
    scores: AiScoreTable, actual: set[str], width: int = 10
) -> list[Segment]:
    """Bucket words by score band and measure appearance per band.

    The accumulated rate of a band counts appearances over that band plus
    every higher band (cumulative from the top), so the lowest band's
    accumulated rate is the appearance fraction of all scored words.
    Empty bands report rate 0 and are flagged.
    """
    if width <= 0 or 100 % width != 0:
        raise InputError(f"segment width {width} must be a positive divisor of 100")
    n_bins = 100 // width
    word_counts = [0] * n_bins
    appeared_counts = [0] * n_bins
    for word, score in zip(scores.words, scores.score):
        idx = min(int(score // width), n_bins - 1)
        word_counts[idx] += 1
        if word in actual:
            appeared_counts[idx] += 1

    segments: list[Segment] = []
    cum_words = 0
    cum_appeared = 0
    for idx in range(n_bins - 1, -1, -1):
        cum_words += word_counts[idx]
        cum_appeared += appeared_counts[idx]
        rate = appeared_counts[idx] / word_counts[idx] if word_counts[idx] else 0.0
        accumulated = cum_appeared / cum_words if cum_words else 0.0
        segments.append(
            Segment(
                lo=idx * width,
                hi=(idx + 1) * width,
                word_count=word_counts[idx],
                appeared_count=appeared_counts[idx],
                appearance_rate=rate,
                accumulated_rate=accumulated,
                empty=word_counts[idx] == 0,
            )
        )
    segments.reverse()
    return segments


def score_histogram(
    scores: AiScoreTable, bin_width: float
) -> list[tuple[float, float, int]]:
    """(lo, hi, count) per bin over [0, 100]; the last bin is closed at 100."""
    if bin_width <= 0:
        raise InputError("histogram bin width must be positive")
    n_bins = max(1, math.ceil(100.0 / bin_width))
    counts = [0] * n_bins
    for score in scores.score:
        counts[min(int(score // bin_width), n_bins - 1)] += 1
    bins = []
    for idx in range(n_bins):
        lo = idx * bin_width
        hi = min(100.0, (idx + 1) * bin_width)
        bins.append((lo, hi, counts[idx]))
    return bins


def build_report(scores: AiScoreTable, actual: set[str], segment_width: int = 10) -> EvalReport:
    """Full evaluation of a score table against the realized vocabulary."""
    interest = set(scores.words)
    tp, accuracy, intersection = prediction_metrics(interest, actual)
    return EvalReport(
        interest_count=len(interest),
        actual_count=len(actual),
        true_positives=tp,
        accuracy=accuracy,
        intersection=intersection,
        segments=segment_analysis(scores, actual, segment_width),
    )


def write_report_json(report: EvalReport, file: str | Path) -> None:
    Path(file).write_text(
        json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8", newline=""
    )


def write_word_scores_csv(scores: AiScoreTable, actual: set[str], file: str | Path) -> None:
    """Per-word CSV: word, score (4 decimals), appeared flag (0/1)."""
    lines = ["word,score,appeared"]
    for word, score in zip(scores.words, scores.score):
        lines.append(f"{word},{score:.4f},{1 if word in actual else 0}")
    Path(file).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")


def write_histogram_csv(bins: list[tuple[float, float, int]], file: str | Path) -> None:
    lines = ["lo,hi,count"]
    for lo, hi, count in bins:
        lines.append(f"{lo:.4f},{hi:.4f},{count}")
    Path(file).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")


def write_segments_csv(segments: list[Segment], file: str | Path) -> None:
    lines = ["lo,hi,word_count,appeared_count,appearance_rate,accumulated_rate,empty"]
    for s in segments:
        lines.append(
            f"{s.lo},{s.hi},{s.word_count},{s.appeared_count},"
            f"{s.appearance_rate:.6f},{s.accumulated_rate:.6f},{1 if s.empty else 0}"
        )
    Path(file).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
