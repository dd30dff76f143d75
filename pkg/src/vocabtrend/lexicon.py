"""Lemma mapping, the word-by-year frequency matrix, screening and splits.

The frequency matrix is the substrate every later stage works from: rows
are lemmas in lexicographic order (the canonical form), columns are years
ascending, cells are raw appearance counts.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import YearDocument
from .errors import InputError

_LEMMA = re.compile(r"^[a-z]+$")


@dataclass(frozen=True)
class LemmaMap:
    """Surface form -> lemma lookup, closed under chaining.

    Closure means every mapped-to lemma maps to itself, so lemmatization is
    idempotent. Enforced when the map is loaded.
    """

    entries: dict[str, str] = field(default_factory=dict)

    @classmethod
    def identity(cls) -> "LemmaMap":
        return cls({})


@dataclass(frozen=True)
class ScreenList:
    """Lemmas approved by expert screening; everything else is discarded."""

    kept: frozenset[str]


@dataclass
class FrequencyMatrix:
    """Lemma x year count matrix. words sorted, years ascending, counts >= 0."""

    words: list[str]
    years: list[int]
    counts: np.ndarray  # shape (len(words), len(years)), int64

    def validate(self) -> None:
        if self.counts.shape != (len(self.words), len(self.years)):
            raise InputError(
                f"frequency matrix shape {self.counts.shape} does not match "
                f"{len(self.words)} words x {len(self.years)} years"
            )
        if len(set(self.words)) != len(self.words):
            raise InputError("frequency matrix words are not unique")
        if any(a >= b for a, b in zip(self.words, self.words[1:])):
            raise InputError("frequency matrix words are not in canonical sorted order")
        if any(a >= b for a, b in zip(self.years, self.years[1:])):
            raise InputError("frequency matrix years are not strictly ascending")
        if self.counts.size and self.counts.min() < 0:
            raise InputError("frequency matrix contains negative counts")


def lemmatize(token: str, lemma_map: LemmaMap) -> str:
    """Mapped lemma when known, otherwise the token itself."""
    return lemma_map.entries.get(token, token)


def load_lemma_map(file: str | Path) -> LemmaMap:
    """Read tab-separated surface/lemma pairs and close chains.

    a->b plus b->c collapses to a->c, and every final lemma maps to itself.
    Conflicting duplicate surfaces and chain cycles are fatal.
    """
    path = Path(file)
    try:
        raw = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read lemma map {path}: {exc}") from exc

    pairs: dict[str, str] = {}
    for lineno, line in enumerate(raw.split("\n"), start=1):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not _LEMMA.match(fields[0]) or not _LEMMA.match(fields[1]):
            raise InputError(
                f"{path}:{lineno}: expected 'surface<TAB>lemma' with lowercase letters"
            )
        surface, lemma = fields
        if surface in pairs and pairs[surface] != lemma:
            raise InputError(
                f"{path}:{lineno}: surface '{surface}' maps to both "
                f"'{pairs[surface]}' and '{lemma}'"
            )
        pairs[surface] = lemma

    resolved: dict[str, str] = {}
    for surface in pairs:
        chain = []
        current = surface
        while current in pairs and current not in resolved:
            if current in chain:
                raise InputError(f"{path}: lemma chain cycle involving '{current}'")
            chain.append(current)
            current = pairs[current]
        final = resolved.get(current, current)
        for seen in chain:
            resolved[seen] = final
    for final in set(resolved.values()):
        resolved.setdefault(final, final)
    return LemmaMap(resolved)


def load_screen_list(file: str | Path) -> ScreenList:
    """One approved lemma per line; an empty list is an error."""
    path = Path(file)
    try:
        raw = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read screen list {path}: {exc}") from exc
    kept = set()
    for lineno, line in enumerate(raw.split("\n"), start=1):
        if not line:
            continue
        if not _LEMMA.match(line):
            raise InputError(f"{path}:{lineno}: screen entries must be lowercase letters")
        kept.add(line)
    if not kept:
        raise InputError(f"screen list {path} is empty")
    return ScreenList(frozenset(kept))


def build_frequency_matrix(docs: list[YearDocument], lemma_map: LemmaMap) -> FrequencyMatrix:
    """Count lemma occurrences per year over the whole corpus."""
    if not docs:
        raise InputError("cannot build a frequency matrix from an empty corpus")
    years = [d.year for d in docs]
    if len(set(years)) != len(years):
        raise InputError("corpus years are not unique")

    per_year = []
    vocab: set[str] = set()
    for doc in sorted(docs, key=lambda d: d.year):
        counter = Counter(lemmatize(t, lemma_map) for t in doc.tokens)
        vocab.update(counter)
        per_year.append((doc.year, counter))

    words = sorted(vocab)
    index = {w: i for i, w in enumerate(words)}
    counts = np.zeros((len(words), len(per_year)), dtype=np.int64)
    for col, (_, counter) in enumerate(per_year):
        for word, n in counter.items():
            counts[index[word], col] = n
    matrix = FrequencyMatrix(words, [y for y, _ in per_year], counts)
    matrix.validate()
    return matrix


def apply_screening(matrix: FrequencyMatrix, screen: ScreenList) -> FrequencyMatrix:
    """Keep only screened rows, preserving order; an empty result is fatal."""
    mask = np.array([w in screen.kept for w in matrix.words], dtype=bool)
    if not mask.any():
        raise InputError("screening removed every word")
    words = [w for w, m in zip(matrix.words, mask) if m]
    return FrequencyMatrix(words, list(matrix.years), matrix.counts[mask].copy())


def rank_split(matrix: FrequencyMatrix, k: int) -> tuple[FrequencyMatrix, FrequencyMatrix]:
    """Split into the k highest-total-frequency words and the rest.

    Ties on total count break lexicographically ascending. Both halves keep
    the canonical word ordering of the input.
    """
    n = len(matrix.words)
    if not 0 < k <= n:
        raise InputError(f"rank split size {k} out of range 1..{n}")
    totals = matrix.counts.sum(axis=1)
    ranked = sorted(range(n), key=lambda i: (-totals[i], matrix.words[i]))
    top = set(ranked[:k])
    mask = np.array([i in top for i in range(n)], dtype=bool)
    high = FrequencyMatrix(
        [w for w, m in zip(matrix.words, mask) if m], list(matrix.years), matrix.counts[mask].copy()
    )
    low = FrequencyMatrix(
        [w for w, m in zip(matrix.words, mask) if not m],
        list(matrix.years),
        matrix.counts[~mask].copy(),
    )
    return high, low


def diff_vocabularies(
    a: FrequencyMatrix, b: FrequencyMatrix
) -> tuple[set[str], set[str], set[str]]:
    """Partition two vocabularies into (only in a, only in b, in both)."""
    va, vb = set(a.words), set(b.words)
    return va - vb, vb - va, va & vb


def write_frequency_csv(matrix: FrequencyMatrix, file: str | Path) -> None:
    """Canonical CSV form: header 'word,<year>,...', one integer row per word."""
    matrix.validate()
    lines = ["word," + ",".join(str(y) for y in matrix.years)]
    for word, row in zip(matrix.words, matrix.counts):
        lines.append(word + "," + ",".join(str(int(c)) for c in row))
    Path(file).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")


def read_frequency_csv(file: str | Path) -> FrequencyMatrix:
    path = Path(file)
    try:
        raw = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read frequency CSV {path}: {exc}") from exc
    lines = [ln for ln in raw.split("\n") if ln]
    if not lines:
        raise InputError(f"frequency CSV {path} is empty")
    header = lines[0].split(",")
    if header[:1] != ["word"] or len(header) < 2:
        raise InputError(f"{path}:1: expected header 'word,<year>,...'")
    try:
        years = [int(y) for y in header[1:]]
    except ValueError as exc:
        raise InputError(f"{path}:1: years must be integers") from exc
    words = []
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != len(header):
            raise InputError(f"{path}:{lineno}: expected {len(header)} columns")
        if not _LEMMA.match(fields[0]):
            raise InputError(f"{path}:{lineno}: word must be lowercase letters")
        try:
            rows.append([int(c) for c in fields[1:]])
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: counts must be integers") from exc
        words.append(fields[0])
    counts = np.array(rows, dtype=np.int64).reshape(len(words), len(years))
    matrix = FrequencyMatrix(words, years, counts)
    matrix.validate()
    return matrix
