import configparser
import json

import numpy as np
import pytest

from detune import cli
from detune.config import load_config
from detune.errors import ConfigurationError
from detune.persistence import load_forecaster


def run_cli(*argv):
    return cli.main([str(a) for a in argv])


TINY_TUNE = ("--synthetic", 120, "--pop-size", 4, "--generations", 1, "--epoch-cap", 1)


class TestBench:
    def test_reaches_documented_tolerance(self, tmp_path):
        out = tmp_path / "bench"
        code = run_cli("bench", "--opt", "de", "--fn", "sphere", "--dims", 5,
                       "--gens", 100, "--seed", 0, "--out-dir", out)
        assert code == 0
        history = (out / "history.csv").read_text().strip().splitlines()
        assert history[0] == "generation,best_fitness,mean_fitness,evaluations"
        assert len(history) == 102  # header + generations 0..100
        assert (out / "convergence.png").stat().st_size > 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert "history.csv" in manifest["artifacts"]

    def test_unknown_function_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run_cli("bench", "--fn", "mystery", "--out-dir", tmp_path)
        assert exc.value.code == 2

    def test_unknown_optimizer_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run_cli("bench", "--opt", "annealing", "--out-dir", tmp_path)
        assert exc.value.code == 2

    def test_zero_budget_history_has_only_generation_zero(self, tmp_path):
        out = tmp_path / "bench0"
        run_cli("bench", "--opt", "pso", "--fn", "sphere", "--dims", 3,
                "--gens", 0, "--out-dir", out)
        history = (out / "history.csv").read_text().strip().splitlines()
        assert len(history) == 2
        assert history[1].startswith("0,")

    def test_budget_flag_overrides_generations(self, tmp_path):
        out = tmp_path / "bench_budget"
        run_cli("bench", "--opt", "ga", "--fn", "sphere", "--dims", 3,
                "--pop", 10, "--budget", 200, "--out-dir", out)
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["generations"] == 19

    def test_missed_tolerance_is_runtime_failure(self, tmp_path):
        code = run_cli("bench", "--opt", "de", "--fn", "rastrigin", "--dims", 5,
                       "--gens", 2, "--tol", 1e-12, "--out-dir", tmp_path / "hard")
        assert code == 1


class TestTune:
    def test_emits_decoded_triple_within_bounds(self, tmp_path):
        out = tmp_path / "tune"
        code = run_cli("tune", *TINY_TUNE, "--seed", 1, "--out-dir", out)
        assert code == 0
        parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
        parser.read(out / "best_trial.ini")
        batch = parser.getint("trial", "batch_size")
        epochs = parser.getint("trial", "epochs")
        lr = parser.getfloat("trial", "learning_rate")
        assert 16 <= batch <= 256
        assert 10 <= epochs <= 1000
        assert 1e-4 <= lr <= 0.5
        assert (out / "tuning_history.csv").exists()
        assert (out / "tuning_convergence.png").exists()

    def test_manual_skips_search(self, tmp_path):
        out = tmp_path / "manual"
        code = run_cli("tune", "--synthetic", 120, "--optimizer", "manual",
                       "--seed", 1, "--out-dir", out)
        assert code == 0
        assert not (out / "tuning_history.csv").exists()
        parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
        parser.read(out / "best_trial.ini")
        # mid-range defaults
        assert parser.getint("trial", "batch_size") == 136
        assert parser.getint("trial", "epochs") == 505

    def test_same_seed_same_history_bytes(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run_cli("tune", *TINY_TUNE, "--seed", 7, "--out-dir", a)
        run_cli("tune", *TINY_TUNE, "--seed", 7, "--out-dir", b)
        assert (a / "tuning_history.csv").read_bytes() == (b / "tuning_history.csv").read_bytes()

    def test_no_data_source_is_config_error(self, tmp_path):
        assert run_cli("tune", "--out-dir", tmp_path / "x") == 2


class TestTrain:
    def test_zero_epoch_model_equals_initialization(self, tmp_path):
        out = tmp_path / "train0"
        code = run_cli("train", "--synthetic", 120, "--seed", 5, "--out-dir", out,
                       "--batch-size", 16, "--epochs", 0, "--learning-rate", 0.01)
        assert code == 0
        bundle = load_forecaster(out / "model.npz")
        reference = type(bundle.model)(8, 64, 24, rng=np.random.default_rng(5))
        for name in ("w_z", "u_z", "w_h", "w_out", "b_out"):
            np.testing.assert_array_equal(getattr(bundle.model, name), getattr(reference, name))
        report = (out / "train_report.csv").read_text().strip().splitlines()
        assert len(report) == 2  # header + epoch 0

    def test_training_improves_validation(self, tmp_path):
        out = tmp_path / "train1"
        code = run_cli("train", "--synthetic", 400, "--seed", 5, "--out-dir", out,
                       "--batch-size", 24, "--epochs", 8, "--learning-rate", 0.01)
        assert code == 0
        rows = (out / "train_report.csv").read_text().strip().splitlines()[1:]
        first_val = float(rows[0].split(",")[2])
        last_val = float(rows[-1].split(",")[2])
        assert last_val < first_val
        assert (out / "training_curve.png").exists()

    def test_missing_data_file_names_path(self, tmp_path, capsys):
        code = run_cli("train", "--data", tmp_path / "nope.csv", "--out-dir", tmp_path,
                       "--batch-size", 16, "--epochs", 1, "--learning-rate", 0.01)
        assert code == 1
        assert "nope.csv" in capsys.readouterr().err

    def test_partial_trial_flags_rejected(self, tmp_path):
        code = run_cli("train", "--synthetic", 120, "--out-dir", tmp_path,
                       "--batch-size", 16)
        assert code == 2

    def test_trial_file_round_trip(self, tmp_path):
        tune_out = tmp_path / "tuned"
        run_cli("tune", "--synthetic", 120, "--optimizer", "manual", "--seed", 2,
                "--out-dir", tune_out)
        train_out = tmp_path / "trained"
        code = run_cli("train", "--synthetic", 120, "--seed", 2, "--out-dir", train_out,
                       "--trial", tune_out / "best_trial.ini", "--final-epoch-cap", 2)
        assert code == 0
        assert (train_out / "model.npz").exists()


class TestForecast:
    @pytest.fixture()
    def trained(self, tmp_path):
        out = tmp_path / "model_dir"
        run_cli("train", "--synthetic", 200, "--seed", 3, "--out-dir", out,
                "--batch-size", 16, "--epochs", 2, "--learning-rate", 0.01)
        return out / "model.npz"

    def test_writes_24_rows(self, tmp_path, trained):
        out = tmp_path / "fc"
        code = run_cli("forecast", "--model", trained, "--synthetic", 200, "--seed", 3,
                       "--at", "2021-01-04T00:00", "--out-dir", out)
        assert code == 0
        rows = (out / "forecast.csv").read_text().strip().splitlines()
        assert rows[0] == "timestamp,actual_kw,predicted_kw"
        assert len(rows) == 25
        assert rows[1].startswith("2021-01-04T00:00")
        assert (out / "forecast.png").exists()

    def test_first_valid_origin_is_hour_three(self, tmp_path, trained):
        ok = run_cli("forecast", "--model", trained, "--synthetic", 200, "--seed", 3,
                     "--at", "2021-01-01T03:00", "--out-dir", tmp_path / "ok")
        assert ok == 0

    def test_too_early_origin_names_earliest_valid(self, tmp_path, trained, capsys):
        code = run_cli("forecast", "--model", trained, "--synthetic", 200, "--seed", 3,
                       "--at", "2021-01-01T02:00", "--out-dir", tmp_path / "bad")
        assert code == 1
        assert "2021-01-01T03:00" in capsys.readouterr().err

    def test_missing_model_file(self, tmp_path, capsys):
        code = run_cli("forecast", "--model", tmp_path / "ghost.npz", "--synthetic", 200,
                       "--at", "2021-01-01T03:00", "--out-dir", tmp_path)
        assert code == 1
        assert "ghost.npz" in capsys.readouterr().err


class TestCompare:
    def test_two_methods_two_rows(self, tmp_path):
        out = tmp_path / "cmp"
        code = run_cli("compare", "--synthetic", 120, "--methods", "manual,de",
                       "--pop-size", 4, "--generations", 1, "--epoch-cap", 1,
                       "--final-epoch-cap", 1, "--seed", 2, "--out-dir", out)
        assert code == 0
        lines = (out / "comparison.csv").read_text().strip().splitlines()
        assert lines[0] == "method,mape,mse,n_windows"
        assert len(lines) == 3
        assert {l.split(",")[0] for l in lines[1:]} == {"manual", "de"}
        assert (out / "comparison.png").exists()
        assert (out / "comparison.txt").exists()
        assert (out / "model_manual.npz").exists()
        assert (out / "model_de.npz").exists()

    def test_single_method(self, tmp_path):
        out = tmp_path / "cmp1"
        code = run_cli("compare", "--synthetic", 120, "--methods", "manual",
                       "--final-epoch-cap", 1, "--seed", 2, "--out-dir", out)
        assert code == 0
        assert len((out / "comparison.csv").read_text().strip().splitlines()) == 2

    def test_failed_method_marks_row_and_exit(self, tmp_path, monkeypatch):
        real = cli._tune_once

        def exploding(cfg, splits, history_path, optimizer):
            if optimizer == "ga":
                raise RuntimeError("synthetic failure")
            return real(cfg, splits, history_path, optimizer)

        monkeypatch.setattr(cli, "_tune_once", exploding)
        out = tmp_path / "cmpfail"
        code = run_cli("compare", "--synthetic", 120, "--methods", "manual,ga",
                       "--final-epoch-cap", 1, "--seed", 2, "--out-dir", out)
        assert code == 1
        lines = (out / "comparison.csv").read_text().strip().splitlines()
        assert any(l.startswith("ga,,") for l in lines)
        text = (out / "comparison.txt").read_text()
        assert "failed" in text


class TestDataFilePath:
    def test_csv_input_consumed_and_never_mutated(self, tmp_path):
        import hashlib

        from detune.data import synthesize_load, write_csv

        csv_path = write_csv(synthesize_load(150, seed=8), tmp_path / "load.csv")
        before = hashlib.sha256(csv_path.read_bytes()).hexdigest()
        out = tmp_path / "out"
        code = run_cli("train", "--data", csv_path, "--seed", 8, "--out-dir", out,
                       "--batch-size", 16, "--epochs", 1, "--learning-rate", 0.01)
        assert code == 0
        assert hashlib.sha256(csv_path.read_bytes()).hexdigest() == before
        assert (out / "model.npz").exists()


class TestParallelEvaluation:
    def test_parallel_tune_matches_sequential(self, tmp_path):
        seq, par = tmp_path / "seq", tmp_path / "par"
        run_cli("tune", *TINY_TUNE, "--seed", 6, "--out-dir", seq)
        run_cli("tune", *TINY_TUNE, "--seed", 6, "--parallel", 3, "--out-dir", par)
        assert (seq / "tuning_history.csv").read_bytes() == (par / "tuning_history.csv").read_bytes()
        assert (seq / "best_trial.ini").read_bytes() == (par / "best_trial.ini").read_bytes()


class TestSearchSpaceDefaults:
    def test_default_bounds_and_kinds(self):
        from detune.config import default_search_space

        space = default_search_space()
        by_name = {p.name: p for p in space.params}
        assert by_name["batch_size"].lower == 16
        assert by_name["batch_size"].upper == 256
        assert by_name["batch_size"].kind == "integer"
        assert by_name["epochs"].lower == 10
        assert by_name["epochs"].upper == 1000
        assert by_name["epochs"].kind == "integer"
        assert by_name["learning_rate"].lower == 1e-4
        assert by_name["learning_rate"].upper == 0.5
        assert by_name["learning_rate"].kind == "continuous"


class TestConfigFile:
    def test_file_values_and_flag_overrides(self, tmp_path):
        cfg_path = tmp_path / "run.ini"
        cfg_path.write_text(
            "[data]\nsynthetic_hours = 150\n"
            "[tune]\noptimizer = pso\npop_size = 5\n"
            "[run]\nseed = 9\n"
        )
        cfg = load_config(cfg_path, {"pop_size": 6})
        assert cfg.synthetic_hours == 150
        assert cfg.optimizer == "pso"
        assert cfg.pop_size == 6  # flag wins
        assert cfg.seed == 9

    def test_all_invalid_fields_reported_at_once(self, tmp_path):
        cfg_path = tmp_path / "bad.ini"
        cfg_path.write_text(
            "[data]\nratios = 0.5, 0.4\n"
            "[tune]\noptimizer = sa\npop_size = 2\n"
        )
        with pytest.raises(ConfigurationError) as err:
            load_config(cfg_path)
        message = str(err.value)
        assert "ratios" in message
        assert "optimizer" in message
        assert "pop_size" in message

    def test_csv_and_synthetic_conflict(self):
        with pytest.raises(ConfigurationError) as err:
            load_config(None, {"csv_path": "x.csv", "synthetic_hours": 100})
        assert "mutually exclusive" in str(err.value)

    def test_search_bounds_from_file(self, tmp_path):
        cfg_path = tmp_path / "space.ini"
        cfg_path.write_text("[search]\nbatch_size = 8, 32\nlearning_rate = 0.001, 0.1\n")
        cfg = load_config(cfg_path)
        by_name = {p.name: p for p in cfg.space.params}
        assert by_name["batch_size"].lower == 8
        assert by_name["batch_size"].upper == 32
        assert by_name["batch_size"].kind == "integer"
        assert by_name["learning_rate"].upper == 0.1

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_config(tmp_path / "absent.ini")

    def test_manual_section_round_trip(self, tmp_path):
        cfg_path = tmp_path / "manual.ini"
        cfg_path.write_text(
            "[manual]\nbatch_size = 24\nepochs = 1000\nlearning_rate = 0.1\n"
        )
        cfg = load_config(cfg_path)
        trial = cfg.manual_or_midpoint()
        assert (trial.batch_size, trial.epochs, trial.learning_rate) == (24, 1000, 0.1)

    def test_incomplete_manual_section(self, tmp_path):
        cfg_path = tmp_path / "manual.ini"
        cfg_path.write_text("[manual]\nbatch_size = 24\n")
        with pytest.raises(ConfigurationError) as err:
            load_config(cfg_path)
        assert "missing" in str(err.value)


class TestManifest:
    def test_manifest_hashes_artifacts(self, tmp_path):
        out = tmp_path / "m"
        run_cli("tune", *TINY_TUNE, "--seed", 4, "--out-dir", out)
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "tune"
        assert manifest["config"]["seed"] == 4
        for name, digest in manifest["artifacts"].items():
            assert len(digest) == 64
        assert "tuning_history.csv" in manifest["artifacts"]
        assert "best_trial.ini" in manifest["artifacts"]
