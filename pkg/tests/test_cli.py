import json

import numpy as np
import pytest

from vocabtrend.cli import load_config, main
from vocabtrend.errors import InputError
from vocabtrend.lexicon import read_frequency_csv
from vocabtrend.neuralnet import load_checkpoint, save_checkpoint
from vocabtrend.synthetic import generate_corpus


def write_config(path, corpus_dir, output_dir, **extra):
    lines = [
        "# test run configuration",
        f"corpus_dir = {corpus_dir}",
        f"output_dir = {output_dir}",
    ]
    for key, value in extra.items():
        lines.append(f"{key} = {value}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def small_run(tmp_path):
    """Synthetic 8-year corpus plus a fast training configuration."""
    corpus_dir = tmp_path / "corpus"
    generate_corpus(corpus_dir, n_years=8, seed=41)
    ensemble = tmp_path / "ensemble.tsv"
    ensemble.write_text("2\t0.6\n3\t0.4\n", encoding="utf-8")
    out = tmp_path / "out"
    config = write_config(
        tmp_path / "run.cfg",
        corpus_dir,
        out,
        ensemble=ensemble.name,
        hidden_size=4,
        dense1=4,
        dense2=3,
        epochs=3,
        batch_size=16,
        seed=5,
    )
    return config, out


class TestConfig:
    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("corpus_dir = .\noutput_dir = out\nbogus = 1\n", encoding="utf-8")
        with pytest.raises(InputError, match="bogus"):
            load_config(cfg)

    def test_missing_required_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("output_dir = out\n", encoding="utf-8")
        with pytest.raises(InputError, match="corpus_dir"):
            load_config(cfg)

    def test_relative_paths_resolve_against_config_dir(self, tmp_path):
        (tmp_path / "corpus").mkdir()
        cfg = write_config(tmp_path / "run.cfg", "corpus", "out")
        config = load_config(cfg)
        assert config.corpus_dir == tmp_path / "corpus"
        assert config.output_dir == tmp_path / "out"

    def test_missing_referenced_file_rejected(self, tmp_path):
        (tmp_path / "corpus").mkdir()
        cfg = write_config(tmp_path / "run.cfg", "corpus", "out", lemma_map="nope.tsv")
        with pytest.raises(InputError, match="lemma_map"):
            load_config(cfg)

    def test_bad_segment_width_rejected(self, tmp_path):
        (tmp_path / "corpus").mkdir()
        cfg = write_config(tmp_path / "run.cfg", "corpus", "out", segment_width=30)
        with pytest.raises(InputError, match="segment_width"):
            load_config(cfg)

    def test_seed_override_wins(self, tmp_path):
        (tmp_path / "corpus").mkdir()
        cfg = write_config(tmp_path / "run.cfg", "corpus", "out", seed=5)
        assert load_config(cfg).hyper.seed == 5
        assert load_config(cfg, seed_override=9).hyper.seed == 9


class TestIngest:
    def test_ingest_fixture_counts(self, tmp_path, capsys):
        corpus_dir = tmp_path / "corpus"
        info = generate_corpus(corpus_dir, n_years=10, seed=13)
        out = tmp_path / "out"
        cfg = write_config(tmp_path / "run.cfg", corpus_dir, out)
        assert main(["ingest", "--config", str(cfg)]) == 0
        matrix = read_frequency_csv(out / "frequency.csv")
        assert len(matrix.words) == 50 and len(matrix.years) == 10
        assert matrix.words == info.words
        assert np.array_equal(matrix.counts, info.counts)
        stdout = capsys.readouterr().out
        assert "vocabulary: 50 lemmas" in stdout

    def test_rerun_byte_identical(self, tmp_path):
        corpus_dir = tmp_path / "corpus"
        generate_corpus(corpus_dir, n_years=6, seed=2)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        cfg_a = write_config(tmp_path / "a.cfg", corpus_dir, out_a)
        cfg_b = write_config(tmp_path / "b.cfg", corpus_dir, out_b)
        assert main(["ingest", "--config", str(cfg_a)]) == 0
        assert main(["ingest", "--config", str(cfg_b)]) == 0
        assert (out_a / "frequency.csv").read_bytes() == (out_b / "frequency.csv").read_bytes()

    def test_missing_corpus_dir_exit_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "run.cfg", tmp_path / "nope", tmp_path / "out")
        assert main(["ingest", "--config", str(cfg)]) == 2
        assert "corpus_dir" in capsys.readouterr().err

    def test_no_output_on_config_error(self, tmp_path):
        cfg = write_config(tmp_path / "run.cfg", tmp_path / "nope", tmp_path / "out")
        main(["ingest", "--config", str(cfg)])
        assert not (tmp_path / "out").exists()

    def test_screening_applied(self, tmp_path):
        corpus_dir = tmp_path / "corpus"
        generate_corpus(corpus_dir, n_years=6, seed=2)
        screen = tmp_path / "screen.txt"
        screen.write_text("persista\npersistb\n", encoding="utf-8")
        out = tmp_path / "out"
        cfg = write_config(tmp_path / "run.cfg", corpus_dir, out, screen_list=screen.name)
        assert main(["ingest", "--config", str(cfg)]) == 0
        assert read_frequency_csv(out / "frequency.csv").words == ["persista", "persistb"]

    def test_lemma_map_applied(self, tmp_path):
        corpus_dir = tmp_path / "corpus"
        generate_corpus(corpus_dir, n_years=6, seed=2)
        lemma = tmp_path / "lemma.tsv"
        lemma.write_text("persista\tpersistb\n", encoding="utf-8")
        out = tmp_path / "out"
        cfg = write_config(tmp_path / "run.cfg", corpus_dir, out, lemma_map=lemma.name)
        assert main(["ingest", "--config", str(cfg)]) == 0
        words = read_frequency_csv(out / "frequency.csv").words
        assert "persista" not in words and "persistb" in words


class TestTrain:
    def test_train_writes_everything_and_is_deterministic(self, small_run, tmp_path):
        config, out = small_run
        assert main(["ingest", "--config", str(config)]) == 0
        assert main(["train", "--config", str(config)]) == 0
        for name in ("scores.csv", "loss_trace.csv", "model_w2.npz", "model_w3.npz"):
            assert (out / name).is_file()
        scores_first = (out / "scores.csv").read_bytes()
        trace_first = (out / "loss_trace.csv").read_bytes()

        assert main(["train", "--config", str(config)]) == 0
        assert (out / "scores.csv").read_bytes() == scores_first
        assert (out / "loss_trace.csv").read_bytes() == trace_first

    def test_jobs_do_not_change_results(self, small_run):
        config, out = small_run
        main(["ingest", "--config", str(config)])
        assert main(["train", "--config", str(config), "--jobs", "1"]) == 0
        one = (out / "scores.csv").read_bytes()
        assert main(["train", "--config", str(config), "--jobs", "2"]) == 0
        assert (out / "scores.csv").read_bytes() == one

    def test_seed_flag_changes_scores(self, small_run):
        config, out = small_run
        main(["ingest", "--config", str(config)])
        main(["train", "--config", str(config)])
        base = (out / "scores.csv").read_bytes()
        assert main(["train", "--config", str(config), "--seed", "99"]) == 0
        assert (out / "scores.csv").read_bytes() != base

    def test_checkpoint_round_trip(self, small_run, tmp_path):
        config, out = small_run
        main(["ingest", "--config", str(config)])
        main(["train", "--config", str(config)])
        params, state, hyper = load_checkpoint(out / "model_w2.npz")
        copy = tmp_path / "copy.npz"
        save_checkpoint(copy, params, state, hyper)
        again, state2, hyper2 = load_checkpoint(copy)
        assert hyper2 == hyper and state2.t == state.t
        for (_, a), (_, b) in zip(params.items(), again.items()):
            assert a.tobytes() == b.tobytes()

    def test_oversized_window_exit_2_names_size(self, tmp_path, capsys):
        corpus_dir = tmp_path / "corpus"
        generate_corpus(corpus_dir, n_years=6, seed=3)
        ensemble = tmp_path / "ensemble.tsv"
        ensemble.write_text("25\t1.0\n", encoding="utf-8")
        out = tmp_path / "out"
        cfg = write_config(tmp_path / "run.cfg", corpus_dir, out, ensemble=ensemble.name, epochs=1)
        main(["ingest", "--config", str(cfg)])
        assert main(["train", "--config", str(cfg)]) == 2
        assert "25" in capsys.readouterr().err

    def test_train_before_ingest_exit_2(self, small_run, capsys):
        config, _ = small_run
        assert main(["train", "--config", str(config)]) == 2
        assert "ingest" in capsys.readouterr().err


class TestEvaluateAndReport:
    def test_evaluate_writes_report(self, small_run, tmp_path, capsys):
        config, out = small_run
        main(["ingest", "--config", str(config)])
        main(["train", "--config", str(config)])
        # exam covering every word that scored in the top decile
        from vocabtrend.forecast import read_scores_csv

        scores = read_scores_csv(out / "scores.csv")
        top = [w for w, s in zip(scores.words, scores.score) if s >= 90.0]
        exam = tmp_path / "2019.txt"
        exam.write_text(". ".join(top) + ".", encoding="utf-8")
        assert main(["evaluate", "--config", str(config), "--exam", str(exam)]) == 0
        report = json.loads((out / "report.json").read_text(encoding="utf-8"))
        top_segment = [s for s in report["segments"] if s["lo"] == 90][0]
        assert top_segment["appearance_rate"] == 1.0
        assert report["true_positives"] == len(top)
        assert (out / "word_scores.csv").is_file()
        assert "accuracy" in capsys.readouterr().out

    def test_empty_exam_exit_2(self, small_run, tmp_path):
        config, out = small_run
        main(["ingest", "--config", str(config)])
        main(["train", "--config", str(config)])
        exam = tmp_path / "empty.txt"
        exam.write_text("12345 !!!", encoding="utf-8")
        assert main(["evaluate", "--config", str(config), "--exam", str(exam)]) == 2

    def test_evaluate_without_scores_exit_2(self, small_run, tmp_path):
        config, _ = small_run
        exam = tmp_path / "2019.txt"
        exam.write_text("persista.", encoding="utf-8")
        assert main(["evaluate", "--config", str(config), "--exam", str(exam)]) == 2

    def test_report_emits_histogram_and_segments(self, small_run, tmp_path, capsys):
        config, out = small_run
        main(["ingest", "--config", str(config)])
        main(["train", "--config", str(config)])
        assert main(["report", "--config", str(config)]) == 0
        assert (out / "histogram.csv").is_file()
        assert not (out / "segments.csv").exists()

        exam = tmp_path / "2019.txt"
        exam.write_text("persista persistb.", encoding="utf-8")
        main(["evaluate", "--config", str(config), "--exam", str(exam)])
        assert main(["report", "--config", str(config)]) == 0
        assert (out / "segments.csv").is_file()
        histogram = (out / "histogram.csv").read_text(encoding="utf-8").splitlines()
        assert histogram[0] == "lo,hi,count"
        total = sum(int(line.split(",")[2]) for line in histogram[1:])
        assert total == 50


class TestCorrelate:
    def test_correlate_writes_square_csv(self, small_run):
        config, out = small_run
        main(["ingest", "--config", str(config)])
        assert main(["correlate", "--config", str(config)]) == 0
        lines = (out / "correlation.csv").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 51  # header + 50 words
        assert lines[0].startswith("word,")
        assert len(lines[0].split(",")) == 51

    def test_correlate_before_ingest_exit_2(self, small_run):
        config, _ = small_run
        assert main(["correlate", "--config", str(config)]) == 2
