"""Sentence-level word occurrence and the correlation matrix between words.

Correlation is the Pearson coefficient of the binary occurrence vectors
(the phi coefficient). It is computed from integer sufficient statistics,
which makes the result exactly symmetric and invariant under permutations
of the sentence order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError
from .lexicon import LemmaMap, lemmatize


@dataclass
class OccurrenceMatrix:
    """Binary word-in-sentence matrix: rows words, columns sentences."""

    words: list[str]
    sentences: int
    cells: np.ndarray  # shape (len(words), sentences), values 0/1


@dataclass
class CorrelationMatrix:
    """Pairwise word correlations in [-1, 1]; zero-variance rows give 0."""

    words: list[str]
    values: np.ndarray  # square, symmetric


def occurrence_matrix(
    sentences: list[list[str]], vocab: list[str], lemma_map: LemmaMap
) -> OccurrenceMatrix:
    """Mark which vocabulary words occur (after lemmatization) in each sentence."""
    if not vocab:
        raise InputError("occurrence matrix needs a nonempty vocabulary")
    if not sentences:
        raise InputError("occurrence matrix needs at least one sentence")
    index = {w: i for i, w in enumerate(vocab)}
    cells = np.zeros((len(vocab), len(sentences)), dtype=np.uint8)
    for col, sentence in enumerate(sentences):
        for token in sentence:
            row = index.get(lemmatize(token, lemma_map))
            if row is not None:
                cells[row, col] = 1
    return OccurrenceMatrix(list(vocab), len(sentences), cells)


def correlation_matrix(occ: OccurrenceMatrix) -> CorrelationMatrix:
    """Phi coefficient between all word pairs.

    For binary vectors x, y over n sentences with row sums s_x, s_y and
    co-occurrence count s_xy, the coefficient is

        (n * s_xy - s_x * s_y) / sqrt((n*s_x - s_x^2) * (n*s_y - s_y^2)).

    All sums are integers, so the value does not depend on sentence order.
    Any pair involving a constant row is defined as 0, including that row's
    diagonal entry; other diagonal entries are exactly 1.
    """
    n = occ.sentences
    if n < 2:
        raise InputError("correlation needs at least 2 sentences")
    cells = occ.cells.astype(np.int64)
    s = cells.sum(axis=1)
    sxy = cells @ cells.T
    numer = (n * sxy - np.outer(s, s)).astype(np.float64)
    variance = n * s - s * s  # n^2 * var, integer, >= 0
    d = np.sqrt(variance.astype(np.float64))
    denom = np.outer(d, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(denom > 0, numer / np.where(denom > 0, denom, 1.0), 0.0)
    np.clip(values, -1.0, 1.0, out=values)
    nonzero = variance > 0
    np.fill_diagonal(values, 0.0)
    values[np.diag_indices_from(values)] = np.where(nonzero, 1.0, 0.0)
    return CorrelationMatrix(list(occ.words), values)


def write_correlation_csv(corr: CorrelationMatrix, file: str | Path) -> None:
    """CSV with the word list as both header row and leading column, 6 decimals."""
    lines = ["word," + ",".join(corr.words)]
    for word, row in zip(corr.words, corr.values):
        lines.append(word + "," + ",".join(f"{v:.6f}" for v in row))
    Path(file).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
