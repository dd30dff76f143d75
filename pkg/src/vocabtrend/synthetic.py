"""Deterministic synthetic exam corpus with a known ground truth.

The generated vocabulary has three behaviors:
  * 10 persistent words, appearing every year with counts 8..15,
  * 10 extinct words, appearing (counts 8..15) only in the first 4 years,
  * 30 noise words, with uniform counts 0..10 each year.
A plausible forecaster should score the persistent group near the top and
the extinct group near the bottom. Year files include a sprinkling of
letter-free junk (digits, underscores, stray punctuation) so the cleaning
stage has something to do without changing any word count.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

_LETTERS = "abcdefghij"
_ARTIFACTS = ["0921", "_____", "-", " ", "3.14", "((2))"]


@dataclass
class SyntheticCorpus:
    """Ground truth for a generated corpus."""

    persistent: list[str]
    extinct: list[str]
    noise: list[str]
    words: list[str]  # all 50, sorted (canonical frequency-matrix order)
    years: list[int]
    counts: np.ndarray  # (50, n_years) in sorted word order
    exam_year: int | None = None
    exam_words: set[str] | None = None


def _word_lists() -> tuple[list[str], list[str], list[str]]:
    persistent = [f"persist{c}" for c in _LETTERS]
    extinct = [f"extinct{c}" for c in _LETTERS]
    noise = [f"noise{a}{b}" for a in "abc" for b in _LETTERS]
    return persistent, extinct, noise


def _write_year_text(path: Path, words: list[str], counts: np.ndarray, rng: np.random.Generator) -> None:
    tokens: list[str] = []
    for word, count in zip(words, counts):
        tokens.extend([word] * int(count))
    rng.shuffle(tokens)
    for artifact in _ARTIFACTS:
        pos = int(rng.integers(0, len(tokens) + 1))
        tokens.insert(pos, artifact)
    sentences = []
    start = 0
    while start < len(tokens):
        length = int(rng.integers(6, 13))
        chunk = tokens[start : start + length]
        chunk[0] = chunk[0].capitalize()
        sentences.append(" ".join(chunk) + ".")
        start += length
    path.write_text("\n".join(sentences) + "\n", encoding="utf-8")


def generate_corpus(
    corpus_dir: str | Path,
    n_years: int = 12,
    start_year: int = 2011,
    seed: int = 0,
    exam_file: str | Path | None = None,
) -> SyntheticCorpus:
    """Write <year>.txt files (and optionally a next-year exam file).

    Fully deterministic for a given seed. Every word occurs at least once
    over the corpus, so the ingested vocabulary is exactly the 50 generated
    words and the ingested frequency matrix equals `counts`.
    """
    if n_years < 2:
        raise ValueError("need at least 2 years")
    root = Path(corpus_dir)
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    persistent, extinct, noise = _word_lists()
    p_counts = rng.integers(8, 16, size=(len(persistent), n_years))
    e_counts = np.zeros((len(extinct), n_years), dtype=np.int64)
    active = min(4, n_years)
    e_counts[:, :active] = rng.integers(8, 16, size=(len(extinct), active))
    n_counts = rng.integers(0, 11, size=(len(noise), n_years))
    for row in range(n_counts.shape[0]):
        if not n_counts[row].any():
            n_counts[row, 0] = 1  # keep every noise word in the vocabulary

    grouped_words = persistent + extinct + noise
    grouped_counts = np.vstack([p_counts, e_counts, n_counts]).astype(np.int64)
    order = sorted(range(len(grouped_words)), key=lambda i: grouped_words[i])
    words = [grouped_words[i] for i in order]
    counts = grouped_counts[order]

    years = [start_year + i for i in range(n_years)]
    for col, year in enumerate(years):
        _write_year_text(root / f"{year}.txt", words, counts[:, col], rng)

    exam_year = None
    exam_words = None
    if exam_file is not None:
        exam_year = start_year + n_years
        exam_counts = np.concatenate(
            [
                rng.integers(8, 16, size=len(persistent)),
                np.zeros(len(extinct), dtype=np.int64),
                rng.integers(0, 11, size=len(noise)),
            ]
        )[order]
        _write_year_text(Path(exam_file), words, exam_counts, rng)
        exam_words = {w for w, c in zip(words, exam_counts) if c > 0}

    return SyntheticCorpus(
        persistent=persistent,
        extinct=extinct,
        noise=noise,
        words=words,
        years=years,
        counts=counts,
        exam_year=exam_year,
        exam_words=exam_words,
    )


def _main() -> None:
    import argparse

    parser = argparse.ArgumentParser(
        description="Write a synthetic yearly exam corpus with known word behaviour."
    )
    parser.add_argument("corpus_dir", help="directory for the <year>.txt files")
    parser.add_argument("--years", type=int, default=12)
    parser.add_argument("--start-year", type=int, default=2011)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--exam", default=None, help="also write a next-year exam file here")
    args = parser.parse_args()
    info = generate_corpus(
        args.corpus_dir,
        n_years=args.years,
        start_year=args.start_year,
        seed=args.seed,
        exam_file=args.exam,
    )
    print(f"wrote {len(info.years)} year files to {args.corpus_dir}")
    if args.exam:
        print(f"wrote next-year exam ({info.exam_year}) to {args.exam}")


if __name__ == "__main__":
    _main()
