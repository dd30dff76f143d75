import math

import numpy as np
import pytest

from vocabtrend.cooccurrence import (
    OccurrenceMatrix,
    correlation_matrix,
    occurrence_matrix,
    write_correlation_csv,
)
from vocabtrend.errors import InputError
from vocabtrend.lexicon import LemmaMap


def _pearson(x, y):
    """Plain-definition Pearson correlation, the reference the fast path is checked against."""
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0 or syy == 0:
        return 0.0
    return sxy / math.sqrt(sxx * syy)


class TestOccurrenceMatrix:
    def test_hand_fill(self):
        occ = occurrence_matrix([["cat", "dog"], ["cat"]], ["cat", "dog"], LemmaMap.identity())
        assert occ.cells.tolist() == [[1, 1], [1, 0]]
        assert occ.sentences == 2

    def test_absent_word_all_zero(self):
        occ = occurrence_matrix([["cat"]], ["cat", "yeti"], LemmaMap.identity())
        assert occ.cells.tolist() == [[1], [0]]

    def test_repeat_in_sentence_stays_binary(self):
        occ = occurrence_matrix([["cat", "cat", "cat"]], ["cat"], LemmaMap.identity())
        assert occ.cells.tolist() == [[1]]

    def test_lemmatized_lookup(self):
        lm = LemmaMap({"cats": "cat", "cat": "cat"})
        occ = occurrence_matrix([["cats"]], ["cat"], lm)
        assert occ.cells.tolist() == [[1]]

    def test_empty_vocab_fatal(self):
        with pytest.raises(InputError):
            occurrence_matrix([["cat"]], [], LemmaMap.identity())

    def test_empty_sentences_fatal(self):
        with pytest.raises(InputError):
            occurrence_matrix([], ["cat"], LemmaMap.identity())


class TestCorrelationMatrix:
    def _occ(self, rows):
        cells = np.array(rows, dtype=np.uint8)
        words = [f"w{i}" for i in range(cells.shape[0])]
        return OccurrenceMatrix(words, cells.shape[1], cells)

    def test_identical_rows_correlate_fully(self):
        corr = correlation_matrix(self._occ([[1, 0, 1], [1, 0, 1]]))
        assert corr.values[0, 1] == pytest.approx(1.0, abs=1e-12)
        assert corr.values[0, 0] == 1.0  # diagonal is exact by definition

    def test_opposite_two_point_rows(self):
        corr = correlation_matrix(self._occ([[1, 0], [0, 1]]))
        assert corr.values[0, 1] == -1.0

    def test_constant_row_gives_zero_including_diagonal(self):
        corr = correlation_matrix(self._occ([[1, 1, 1], [1, 0, 1]]))
        assert corr.values[0, 0] == 0.0
        assert corr.values[0, 1] == 0.0
        assert corr.values[1, 0] == 0.0
        assert corr.values[1, 1] == 1.0

    def test_single_sentence_fatal(self):
        with pytest.raises(InputError):
            correlation_matrix(self._occ([[1], [0]]))

    def test_matches_definition_pearson(self):
        rng = np.random.default_rng(99)
        for _ in range(25):
            rows = rng.integers(0, 2, size=(int(rng.integers(2, 7)), int(rng.integers(2, 20))))
            corr = correlation_matrix(self._occ(rows))
            for i in range(rows.shape[0]):
                for j in range(rows.shape[0]):
                    if i == j:
                        continue
                    expect = _pearson(rows[i].tolist(), rows[j].tolist())
                    assert corr.values[i, j] == pytest.approx(expect, abs=1e-12)

    def test_properties_on_random_matrices(self):
        rng = np.random.default_rng(4242)
        for _ in range(60):
            w = int(rng.integers(2, 10))
            s = int(rng.integers(2, 30))
            rows = rng.integers(0, 2, size=(w, s)).astype(np.uint8)
            if rng.random() < 0.3:
                rows[int(rng.integers(0, w))] = 1  # force a constant row
            occ = self._occ(rows)
            corr = correlation_matrix(occ)
            v = corr.values
            assert np.array_equal(v, v.T)
            assert v.min() >= -1.0 and v.max() <= 1.0
            perm = rng.permutation(s)
            shuffled = correlation_matrix(self._occ(rows[:, perm]))
            assert np.array_equal(v, shuffled.values)


class TestCorrelationCsv:
    def test_layout(self, tmp_path):
        corr = correlation_matrix(
            occurrence_matrix([["a", "b"], ["a"]], ["a", "b"], LemmaMap.identity())
        )
        path = tmp_path / "corr.csv"
        write_correlation_csv(corr, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "word,a,b"
        assert lines[1].startswith("a,0.000000,")  # 'a' occurs everywhere: zero variance
        assert len(lines) == 3
