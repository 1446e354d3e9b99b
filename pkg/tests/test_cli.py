"""Command-line surface, exercised through main(argv)."""

import csv
import json

import numpy as np
import pytest

from oilcast import load_model, save_schema
from oilcast.cli import main

from conftest import linear_frame, make_frame, small_schema, write_frame_csv


@pytest.fixture
def workspace(tmp_path):
    """A data CSV and matching schema JSON on disk."""
    frame = make_frame(60, k_independent=3, seed=21)
    data = tmp_path / "data.csv"
    schema = tmp_path / "schema.json"
    write_frame_csv(frame, data)
    save_schema(small_schema(3), schema)
    return tmp_path, data, schema, frame


def write_floats(path, values):
    path.write_text("".join(f"{v}\n" for v in values))


class TestIngest:
    def test_prints_frame_stats(self, workspace, capsys):
        tmp, data, schema, frame = workspace
        assert main(["ingest", "--data", str(data), "--schema", str(schema)]) == 0
        out = capsys.readouterr().out
        assert "rows: 60" in out
        assert "columns: 4" in out
        assert "target: y" in out
        assert "dates: 2010-01 .. 2014-12" in out

    def test_missing_file_exits_one(self, tmp_path, capsys):
        assert main(["ingest", "--data", str(tmp_path / "nope.csv")]) == 1
        assert "error:" in capsys.readouterr().err

    def test_bad_header_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("Month,a,b\n2020-01,1,2\n")
        assert main(["ingest", "--data", str(bad)]) == 1
        assert "error:" in capsys.readouterr().err


class TestCorrAndAcf:
    def test_corr_writes_square_matrix(self, workspace, capsys):
        tmp, data, schema, frame = workspace
        out = tmp / "corr.csv"
        assert main(["corr", "--data", str(data), "--schema", str(schema),
                     "--out", str(out)]) == 0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 5
        assert rows[0][1:] == ["x0", "x1", "x2", "y"]
        assert float(rows[1][1]) == 1.0

    def test_acf_writes_both_files(self, workspace):
        tmp, data, schema, frame = workspace
        out_acf, out_pacf = tmp / "a.csv", tmp / "p.csv"
        assert main(["acf", "--data", str(data), "--schema", str(schema),
                     "--diff", "1", "--max-lag", "8",
                     "--out-acf", str(out_acf),
                     "--out-pacf", str(out_pacf)]) == 0
        for path in (out_acf, out_pacf):
            with open(path, newline="") as fh:
                rows = list(csv.reader(fh))
            assert rows[0] == ["lag", "value", "conf_limit"]
            assert len(rows) == 10


class TestTrainForecast:
    @pytest.mark.parametrize("model_args", [
        ["--model", "nn", "--lr", "0.001", "--epochs", "3", "--seed", "9"],
        ["--model", "ridge", "--lambda", "0.5"],
        ["--model", "arima", "--order", "1,1,0"],
    ])
    def test_round_trip(self, workspace, model_args, capsys):
        tmp, data, schema, frame = workspace
        model_path = tmp / "model.json"
        assert main(["train", "--data", str(data), "--schema", str(schema),
                     "--out", str(model_path)] + model_args) == 0
        assert model_path.exists()

        out = tmp / "fc.csv"
        kind = model_args[1]
        if kind == "arima":
            args = ["forecast", "--model-file", str(model_path),
                    "--horizon", "5", "--out", str(out)]
        else:
            args = ["forecast", "--model-file", str(model_path),
                    "--data", str(data), "--schema", str(schema),
                    "--out", str(out)]
        assert main(args) == 0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        if kind == "arima":
            assert rows[0] == ["step", "predicted"]
            assert len(rows) == 6
        else:
            assert rows[0] == ["date", "predicted"]
            assert len(rows) == 61
            assert rows[1][0] == "2010-01"
        for row in rows[1:]:
            assert np.isfinite(float(row[1]))

    def test_nn_seed_controls_model_file(self, workspace):
        tmp, data, schema, frame = workspace
        paths = [tmp / f"m{i}.json" for i in range(3)]
        for path, seed in zip(paths, ("7", "7", "8")):
            assert main(["train", "--data", str(data),
                         "--schema", str(schema), "--model", "nn",
                         "--lr", "0.001", "--epochs", "2",
                         "--seed", seed, "--out", str(path)]) == 0
        same_a, _ = load_model(paths[0])
        same_b, _ = load_model(paths[1])
        other, _ = load_model(paths[2])
        assert np.array_equal(same_a.w1, same_b.w1)
        assert not np.array_equal(same_a.w1, other.w1)

    def test_ridge_forecast_matches_training_target(self, tmp_path, capsys):
        # train and predict on the same file so the normalization window
        # matches the one the target was built from
        frame, test_start, _ = linear_frame(60, 0, k_independent=3)
        data = tmp_path / "data.csv"
        schema = tmp_path / "schema.json"
        write_frame_csv(frame, data)
        save_schema(small_schema(3), schema)
        model_path = tmp_path / "ridge.json"
        out = tmp_path / "pred.csv"
        assert main(["train", "--data", str(data), "--schema", str(schema),
                     "--model", "ridge", "--lambda", "0.0",
                     "--out", str(model_path)]) == 0
        assert main(["forecast", "--model-file", str(model_path),
                     "--data", str(data), "--schema", str(schema),
                     "--out", str(out)]) == 0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        predicted = np.array([float(r[1]) for r in rows])
        np.testing.assert_allclose(predicted, frame.target_values(), atol=1e-8)

    def test_forecast_arima_requires_horizon(self, workspace, capsys):
        tmp, data, schema, frame = workspace
        model_path = tmp / "arima.json"
        main(["train", "--data", str(data), "--schema", str(schema),
              "--model", "arima", "--order", "0,1,0",
              "--out", str(model_path)])
        assert main(["forecast", "--model-file", str(model_path),
                     "--out", str(tmp / "x.csv")]) == 1
        assert "--horizon" in capsys.readouterr().err


class TestEvaluateAndDm:
    def test_evaluate_prints_json(self, tmp_path, capsys):
        a, p = tmp_path / "a.txt", tmp_path / "p.txt"
        write_floats(a, [1.0, 2.0, 3.0, 4.0])
        write_floats(p, [1.5, 2.0, 2.5, 4.5])
        out = tmp_path / "report.json"
        assert main(["evaluate", "--actual", str(a), "--predicted", str(p),
                     "--kind", "in_sample", "--k", "1",
                     "--out", str(out)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert set(payload) >= {"rmse", "mad", "r2"}
        assert json.loads(out.read_text()) == payload

    def test_dm_happy_path(self, tmp_path, capsys):
        rng = np.random.default_rng(22)
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        write_floats(a, rng.normal(size=50))
        write_floats(b, rng.normal(size=50) + 2.0)
        assert main(["dm", "--errors-a", str(a), "--errors-b", str(b)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert set(payload) == {"statistic", "p_value", "n", "horizon"}
        assert payload["n"] == 50

    def test_dm_identical_errors_exit_one(self, tmp_path, capsys):
        a = tmp_path / "a.txt"
        write_floats(a, [1.0, -2.0, 0.5, 3.0, -1.0])
        assert main(["dm", "--errors-a", str(a), "--errors-b", str(a)]) == 1
        assert "loss differential" in capsys.readouterr().err

    def test_unparseable_error_file(self, tmp_path, capsys):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        a.write_text("1.0\noops\n")
        write_floats(b, [1.0, 2.0])
        assert main(["dm", "--errors-a", str(a), "--errors-b", str(b)]) == 1
        assert "error:" in capsys.readouterr().err


class TestGridCommand:
    def test_custom_spec_runs(self, workspace, capsys):
        tmp, data, schema, frame = workspace
        spec = tmp / "grid.json"
        spec.write_text(json.dumps({
            "nn": [{"learning_rate": 0.001, "epochs": 2, "seed": 1}],
            "lambdas": [0.0, 0.5],
            "arima": [[1, 1, 0]],
            "timing_repetitions": 1,
            "seed": 5,
            "test_start": "2014-06",
        }))
        out_dir = tmp / "out"
        assert main(["grid", "--data", str(data), "--schema", str(schema),
                     "--spec", str(spec), "--out", str(out_dir)]) == 0
        printed = capsys.readouterr().out
        assert "cells: 4 (0 failed)" in printed
        with open(out_dir / "grid.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 5
        methods = [r[0] for r in rows[1:]]
        assert methods == ["nn", "ridge", "ridge", "arima"]

    def test_seed_flag_overrides_spec(self, workspace):
        tmp, data, schema, frame = workspace
        spec = tmp / "grid.json"
        spec.write_text(json.dumps({
            "nn": [{"learning_rate": 0.001, "epochs": 2}],
            "timing_repetitions": 1,
            "seed": 5,
            "test_start": "2014-06",
        }))
        rows = {}
        for name, extra in (("a", []), ("b", ["--seed", "99"])):
            out_dir = tmp / name
            assert main(["grid", "--data", str(data), "--schema", str(schema),
                         "--spec", str(spec), "--out", str(out_dir)] + extra) == 0
            with open(out_dir / "grid.csv", newline="") as fh:
                rows[name] = list(csv.reader(fh))[1]
        # different seed, different derived nn initialization, different rmse
        assert rows["a"][2] != rows["b"][2]

    def test_test_start_flag_shrinks_training(self, workspace):
        tmp, data, schema, frame = workspace
        spec = tmp / "grid.json"
        spec.write_text(json.dumps({
            "lambdas": [0.5],
            "timing_repetitions": 1,
            "test_start": "2014-06",
        }))
        out_dir = tmp / "out"
        assert main(["grid", "--data", str(data), "--schema", str(schema),
                     "--spec", str(spec), "--out", str(out_dir),
                     "--test-start", "2014-01"]) == 0
        with open(out_dir / "best_out_sample_error_ridge_out_sample.csv",
                  newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[1][0] == "2014-01"
        assert len(rows) == 13


class TestUsageErrors:
    def test_bad_order_exits_two(self, workspace):
        tmp, data, schema, frame = workspace
        with pytest.raises(SystemExit) as excinfo:
            main(["train", "--data", str(data), "--schema", str(schema),
                  "--model", "arima", "--order", "1,1", "--out", "x.json"])
        assert excinfo.value.code == 2

    def test_bad_month_exits_two(self, workspace):
        tmp, data, schema, frame = workspace
        with pytest.raises(SystemExit) as excinfo:
            main(["grid", "--data", str(data), "--out", "o",
                  "--test-start", "June 2014"])
        assert excinfo.value.code == 2

    def test_missing_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == 2
