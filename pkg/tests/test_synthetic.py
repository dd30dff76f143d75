import numpy as np

from vocabtrend.corpus import default_rules, load_corpus
from vocabtrend.lexicon import LemmaMap, build_frequency_matrix
from vocabtrend.synthetic import generate_corpus


class TestGenerateCorpus:
    def test_structure_and_counts(self, tmp_path):
        info = generate_corpus(tmp_path / "c", n_years=12, seed=1)
        assert len(info.words) == 50
        assert len(info.persistent) == len(info.extinct) == 10
        assert len(info.noise) == 30
        assert info.counts.shape == (50, 12)
        idx = {w: i for i, w in enumerate(info.words)}
        for w in info.persistent:
            row = info.counts[idx[w]]
            assert row.min() >= 8 and row.max() <= 15
        for w in info.extinct:
            row = info.counts[idx[w]]
            assert row[:4].min() >= 8 and np.all(row[4:] == 0)
        for w in info.noise:
            row = info.counts[idx[w]]
            assert row.max() <= 10 and row.sum() >= 1

    def test_ingested_matrix_matches_ground_truth(self, tmp_path):
        info = generate_corpus(tmp_path / "c", n_years=7, seed=3)
        docs = load_corpus(tmp_path / "c", default_rules())
        matrix = build_frequency_matrix(docs, LemmaMap.identity())
        assert matrix.words == info.words
        assert matrix.years == info.years
        assert np.array_equal(matrix.counts, info.counts)

    def test_deterministic(self, tmp_path):
        a = generate_corpus(tmp_path / "a", n_years=5, seed=11)
        b = generate_corpus(tmp_path / "b", n_years=5, seed=11)
        assert np.array_equal(a.counts, b.counts)
        for year in a.years:
            assert (tmp_path / "a" / f"{year}.txt").read_bytes() == (
                tmp_path / "b" / f"{year}.txt"
            ).read_bytes()

    def test_exam_file_written_with_ground_truth(self, tmp_path):
        exam = tmp_path / "exam.txt"
        info = generate_corpus(tmp_path / "c", n_years=6, seed=4, exam_file=exam)
        assert exam.is_file()
        assert info.exam_year == info.years[-1] + 1
        assert set(info.persistent) <= info.exam_words
        assert not (set(info.extinct) & info.exam_words)
