"""Sliding-window datasets, per-window training, and the merged score.

One model is trained per window size N: every word contributes one sample
per position where N consecutive years plus the following target year fit
inside the frequency matrix. Next-year predictions from the different
window sizes are merged by a weighted sum and normalized to a 0..100
score (the word with the largest weighted sum gets 100).
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import repeat
from pathlib import Path

import numpy as np

from .errors import InputError, NumericError
from .lexicon import FrequencyMatrix
from .neuralnet import (
    AdamState,
    Hyperparams,
    ModelParams,
    adam_step,
    backward,
    forward,
    init_params,
    logcosh_loss,
)

_PRED_COLUMN = re.compile(r"^pred_w(\d+)$")


@dataclass
class WindowSet:
    """Training pairs for one window size: (word, N consecutive years) -> next year."""

    size: int
    word_index: np.ndarray  # (S,) row index into the source matrix
    inputs: np.ndarray  # (S, N) float64
    targets: np.ndarray  # (S,) float64

    def __len__(self) -> int:
        return self.inputs.shape[0]


@dataclass(frozen=True)
class EnsembleSpec:
    """Window sizes and their merge weights."""

    entries: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise InputError("ensemble spec has no entries")
        sizes = [n for n, _ in self.entries]
        if len(set(sizes)) != len(sizes):
            raise InputError("ensemble window sizes must be distinct")
        for n, w in self.entries:
            if n < 1:
                raise InputError(f"window size {n} must be >= 1")
            if not (math.isfinite(w) and w >= 0.0):
                raise InputError(f"weight for window {n} must be finite and >= 0")

    @property
    def sizes(self) -> list[int]:
        return [n for n, _ in self.entries]


DEFAULT_ENSEMBLE = EnsembleSpec(((3, 0.5), (5, 0.4), (7, 0.3), (10, 0.2), (13, 0.1)))


@dataclass
class AiScoreTable:
    """Per-word per-window predictions plus the merged, normalized score."""

    words: list[str]
    window_sizes: list[int]
    per_window: np.ndarray  # (len(words), len(window_sizes))
    raw: np.ndarray  # weighted sums, >= 0
    score: np.ndarray  # normalized to [0, 100]


@dataclass
class WindowResult:
    """Everything one per-window training run produces."""

    size: int
    params: ModelParams
    state: AdamState
    epoch_losses: list[float]
    prediction: np.ndarray


def build_windows(matrix: FrequencyMatrix, size: int) -> WindowSet:
    """Every (word, start) pair whose window and target fit in the matrix.

    Sample count is exactly |words| * (|years| - size), ordered word-major.
    """
    n_years = len(matrix.years)
    if not 1 <= size < n_years:
        raise InputError(f"window size {size} out of range 1..{n_years - 1}")
    n_words = len(matrix.words)
    starts_per_word = n_years - size
    word_index = np.repeat(np.arange(n_words), starts_per_word)
    starts = np.tile(np.arange(starts_per_word), n_words)
    cols = starts[:, None] + np.arange(size)[None, :]
    inputs = matrix.counts[word_index[:, None], cols].astype(np.float64)
    targets = matrix.counts[word_index, starts + size].astype(np.float64)
    return WindowSet(size=size, word_index=word_index, inputs=inputs, targets=targets)


def _train(ws: WindowSet, hyper: Hyperparams) -> tuple[ModelParams, AdamState, list[float]]:
    if len(ws) == 0:
        raise InputError("cannot train on an empty window set")
    rng = np.random.default_rng(hyper.seed)
    params = init_params(hyper, rng)
    state = AdamState.zeros_like(params)
    losses: list[float] = []
    n_samples = len(ws)
    for epoch in range(hyper.epochs):
        order = rng.permutation(n_samples)
        total = 0.0
        for batch_no, start in enumerate(range(0, n_samples, hyper.batch_size)):
            idx = order[start : start + hyper.batch_size]
            xb = ws.inputs[idx]
            yb = ws.targets[idx]
            pred, cache = forward(params, xb, training=True, dropout=hyper.dropout, rng=rng)
            loss = logcosh_loss(pred, yb)
            if not math.isfinite(loss):
                raise NumericError(f"non-finite loss at epoch {epoch}, batch {batch_no}")
            grads = backward(params, cache, xb, yb)
            params, state = adam_step(params, grads, state, hyper)
            total += loss * len(idx)
        losses.append(total / n_samples)
    return params, state, losses


def train_model(ws: WindowSet, hyper: Hyperparams) -> tuple[ModelParams, list[float]]:
    """Shuffled minibatch Adam training on one window set.

    Fully deterministic for a given seed: the same stream drives parameter
    init, the per-epoch shuffle, and the dropout masks. Returns the final
    parameters and the mean training loss per epoch (epochs=0 returns the
    untouched initialization).
    """
    params, _, losses = _train(ws, hyper)
    return params, losses


def predict_next(params: ModelParams, matrix: FrequencyMatrix, size: int) -> np.ndarray:
    """Feed each word's most recent `size` years and clamp outputs at zero.

    The network itself has no output activation; negative outputs are cut
    here because a negative appearance tendency has no meaning downstream.
    """
    n_years = len(matrix.years)
    if not 1 <= size <= n_years:
        raise InputError(f"window size {size} exceeds the {n_years} available years")
    window = matrix.counts[:, n_years - size :].astype(np.float64)
    pred, _ = forward(params, window, training=False)
    return np.maximum(pred, 0.0)


def _run_window(matrix: FrequencyMatrix, size: int, hyper: Hyperparams) -> WindowResult:
    # Module-level so process pools can pickle it.
    ws = build_windows(matrix, size)
    params, state, losses = _train(ws, hyper.with_seed(hyper.seed + size))
    return WindowResult(
        size=size,
        params=params,
        state=state,
        epoch_losses=losses,
        prediction=predict_next(params, matrix, size),
    )


def train_ensemble(
    matrix: FrequencyMatrix,
    spec: EnsembleSpec,
    hyper: Hyperparams,
    jobs: int | None = None,
) -> dict[int, WindowResult]:
    """Train one model per ensemble entry, optionally across processes.

    Window sizes are validated up front so nothing is trained when any
    entry is infeasible. Each entry trains with seed = base seed + N, so
    results do not depend on scheduling or completion order. jobs defaults
    to one worker per entry; jobs=1 runs inline.
    """
    n_years = len(matrix.years)
    for n in spec.sizes:
        if n >= n_years:
            raise InputError(
                f"window size {n} needs more than {n_years} years of data"
            )
    if jobs is None:
        jobs = len(spec.entries)
    if jobs < 1:
        raise InputError("jobs must be >= 1")

    if jobs == 1 or len(spec.entries) == 1:
        results = [_run_window(matrix, n, hyper) for n in spec.sizes]
    else:
        workers = min(jobs, len(spec.entries))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_window, repeat(matrix), spec.sizes, repeat(hyper)))
    return {r.size: r for r in results}


def ai_score(
    words: list[str],
    per_window: dict[int, np.ndarray],
    spec: EnsembleSpec,
) -> AiScoreTable:
    """Merge per-window predictions into the final score.

    raw(word) = sum over entries of weight * prediction; scores rescale raw
    so the maximum becomes 100. All-zero raws map to all-zero scores. The
    rescaling is monotone, so rankings by raw and by score agree, and
    scaling every weight by the same positive constant changes nothing.
    """
    columns = []
    for n, _ in spec.entries:
        if n not in per_window:
            raise InputError(f"missing prediction vector for window size {n}")
        vec = np.asarray(per_window[n], dtype=np.float64)
        if vec.shape != (len(words),):
            raise InputError(
                f"prediction vector for window {n} has length {vec.shape}, "
                f"expected {len(words)}"
            )
        if vec.size and (not np.isfinite(vec).all() or vec.min() < 0.0):
            raise InputError(f"predictions for window {n} must be finite and >= 0")
        columns.append(vec)
    matrix = np.column_stack(columns) if columns and len(words) else np.zeros(
        (len(words), len(spec.entries))
    )
    weights = np.array([w for _, w in spec.entries], dtype=np.float64)
    raw = matrix @ weights
    top = raw.max() if raw.size else 0.0
    score = 100.0 * raw / top if top > 0.0 else np.zeros_like(raw)
    return AiScoreTable(
        words=list(words),
        window_sizes=list(spec.sizes),
        per_window=matrix,
        raw=raw,
        score=score,
    )


def load_ensemble_spec(file: str | Path) -> EnsembleSpec:
    """Read 'N<TAB>weight' lines."""
    path = Path(file)
    try:
        raw = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read ensemble spec {path}: {exc}") from exc
    entries = []
    for lineno, line in enumerate(raw.split("\n"), start=1):
        if not line:
            continue
        fields = line.split("\t")
        try:
            if len(fields) != 2:
                raise ValueError
            entries.append((int(fields[0]), float(fields[1])))
        except ValueError:
            raise InputError(f"{path}:{lineno}: expected 'N<TAB>weight'") from None
    if not entries:
        raise InputError(f"ensemble spec {path} is empty")
    return EnsembleSpec(tuple(entries))


def write_scores_csv(table: AiScoreTable, file: str | Path) -> None:
    """CSV: word, one pred_w<N> column per window, raw, score; 4 decimals."""
    header = (
        "word,"
        + ",".join(f"pred_w{n}" for n in table.window_sizes)
        + ",raw,score"
    )
    lines = [header]
    for i, word in enumerate(table.words):
        preds = ",".join(f"{v:.4f}" for v in table.per_window[i])
        lines.append(f"{word},{preds},{table.raw[i]:.4f},{table.score[i]:.4f}")
    Path(file).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")


def read_scores_csv(file: str | Path) -> AiScoreTable:
    path = Path(file)
    try:
        raw_text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read score CSV {path}: {exc}") from exc
    lines = [ln for ln in raw_text.split("\n") if ln]
    if not lines:
        raise InputError(f"score CSV {path} is empty")
    header = lines[0].split(",")
    if len(header) < 4 or header[0] != "word" or header[-2:] != ["raw", "score"]:
        raise InputError(f"{path}:1: expected header 'word,pred_w<N>...,raw,score'")
    sizes = []
    for col in header[1:-2]:
        match = _PRED_COLUMN.match(col)
        if match is None:
            raise InputError(f"{path}:1: unexpected column '{col}'")
        sizes.append(int(match.group(1)))
    words = []
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != len(header):
            raise InputError(f"{path}:{lineno}: expected {len(header)} columns")
        words.append(fields[0])
        try:
            rows.append([float(v) for v in fields[1:]])
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: values must be numeric") from exc
    data = np.array(rows, dtype=np.float64).reshape(len(words), len(header) - 1)
    return AiScoreTable(
        words=words,
        window_sizes=sizes,
        per_window=data[:, : len(sizes)],
        raw=data[:, -2],
        score=data[:, -1],
    )
