import json

import pytest

from selboost.cli import build_run_config, main, parse_config_file
from selboost.dataset import encode_labels, save_feature_csv
from selboost.errors import ConfigError

from conftest import synthetic_benchmark

ENC = encode_labels(["covid", "normal"])


@pytest.fixture(scope="module")
def bench_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "bench.csv"
    save_feature_csv(synthetic_benchmark(), ENC, path)
    return path


FAST_FLAGS = ["--rounds", "10", "--max-depth", "3", "--n-features", "5", "--seed", "7"]


class TestConfigFile:
    def test_parse_key_values(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# comment\n"
            "task = binary\n"
            "folds = 5\n"
            "eta = 0.1\n"
            "lambda = 2.0\n"
            'positive_class = "covid"\n'
            "global-sweep = true\n"
            "\n"
        )
        values = parse_config_file(cfg)
        assert values["task"] == "binary"
        assert values["folds"] == 5
        assert values["eta"] == 0.1
        assert values["reg_lambda"] == 2.0
        assert values["positive_class"] == "covid"
        assert values["global_sweep"] is True

    def test_unknown_key(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("mystery = 1\n")
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_file(cfg)

    def test_bad_value(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("folds = many\n")
        with pytest.raises(ConfigError, match="cannot parse"):
            parse_config_file(cfg)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="no such config"):
            parse_config_file(tmp_path / "nope.cfg")

    def test_build_run_config_splits_train_params(self):
        config = build_run_config({"folds": 3, "eta": 0.5, "rounds": 7})
        assert config.folds == 3
        assert config.train_params.eta == 0.5
        assert config.train_params.rounds == 7

    def test_build_run_config_rejects_bad_values(self):
        with pytest.raises(ConfigError):
            build_run_config({"eta": 2.0})


class TestExitCodes:
    def test_usage_error_is_1(self, capsys):
        assert main(["cv"]) == 1  # missing --input
        assert "error" in capsys.readouterr().err

    def test_unknown_flag_is_1(self):
        assert main(["cv", "--bogus"]) == 1

    def test_data_error_is_2(self, tmp_path, capsys):
        missing = tmp_path / "none.csv"
        assert main(["cv", "--input", str(missing), "--n-features", "2"]) == 2
        assert "data error" in capsys.readouterr().err

    def test_success_is_0(self, bench_csv, tmp_path):
        assert (
            main(
                ["cv", "--input", str(bench_csv), "--out-dir", str(tmp_path)]
                + FAST_FLAGS
            )
            == 0
        )
        assert (tmp_path / "report.json").exists()


class TestSubcommands:
    def test_cv_text_format(self, bench_csv, tmp_path, capsys):
        code = main(
            ["cv", "--input", str(bench_csv), "--format", "text", "--out-dir", str(tmp_path)]
            + FAST_FLAGS
        )
        assert code == 0
        text = (tmp_path / "report.txt").read_text()
        assert "Folds-5" in text and "Average" in text

    def test_cv_stdout_json(self, bench_csv, capsys):
        assert main(["cv", "--input", str(bench_csv)] + FAST_FLAGS) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["schema_version"] == 1
        assert payload["n_folds"] == 5

    def test_select_writes_scores(self, bench_csv, tmp_path, capsys):
        scores = tmp_path / "scores.csv"
        selection = tmp_path / "selection.json"
        code = main(
            [
                "select",
                "--input", str(bench_csv),
                "--n-features", "5",
                "--scores-out", str(scores),
                "--selection-out", str(selection),
            ]
        )
        assert code == 0
        assert scores.read_text().splitlines()[0] == "feature,msb,msw,f,rank"
        payload = json.loads(selection.read_text())
        assert len(payload["selected_indices"]) == 5

    def test_train_predict_evaluate_chain(self, bench_csv, tmp_path, capsys):
        run_dir = tmp_path / "run"
        assert (
            main(
                ["train", "--input", str(bench_csv), "--out-dir", str(run_dir)]
                + FAST_FLAGS
            )
            == 0
        )
        model = run_dir / "model.json"
        selection = run_dir / "selection.json"
        assert model.exists() and selection.exists()

        preds = tmp_path / "preds.csv"
        code = main(
            [
                "predict",
                "--model", str(model),
                "--selection", str(selection),
                "--input", str(bench_csv),
                "--out", str(preds),
            ]
        )
        assert code == 0
        assert preds.read_text().startswith("row,predicted_label,proba_0,proba_1")

        capsys.readouterr()
        code = main(
            [
                "evaluate",
                "--model", str(model),
                "--selection", str(selection),
                "--input", str(bench_csv),
            ]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["n_samples"] == 200
        assert payload["metrics"]["binary"]["accuracy"] > 0.8

    def test_sweep_subcommand(self, bench_csv, capsys):
        code = main(
            [
                "sweep",
                "--input", str(bench_csv),
                "--k-min", "4", "--k-max", "6",
                "--rounds", "10", "--max-depth", "3", "--seed", "7",
            ]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert 4 <= payload["best_k"] <= 6
        assert len(payload["curve"]) == 3

    def test_report_rerender(self, bench_csv, tmp_path, capsys):
        out_dir = tmp_path / "out"
        main(
            ["cv", "--input", str(bench_csv), "--out-dir", str(out_dir)] + FAST_FLAGS
        )
        capsys.readouterr()
        code = main(
            ["report", "--report", str(out_dir / "report.json"), "--format", "text"]
        )
        assert code == 0
        assert "Overlapped confusion matrix" in capsys.readouterr().out

    def test_config_file_with_flag_override(self, bench_csv, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            f"input = {bench_csv}\nn_features = 5\nrounds = 10\nmax_depth = 3\nfolds = 5\nseed = 7\n"
        )
        assert main(["cv", "--config", str(cfg), "--folds", "4"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["n_folds"] == 4  # flag beats file
        assert payload["config"]["train_params"]["rounds"] == 10
