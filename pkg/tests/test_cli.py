import json

import pytest

from agroyield import cli, ingest
from agroyield.cli import load_config, resolve_config, run
from agroyield.errors import MalformedConfig


@pytest.fixture(scope="module")
def data_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "synth.csv"
    assert run(["generate", "--coverage", "--seed", "7",
                "--out", str(path)]) == 0
    return path


class TestGenerate:
    def test_coverage_row_count(self, data_csv):
        lines = data_csv.read_text().strip().splitlines()
        assert len(lines) == 421  # header + 7 districts * 10 years * 6 crops

    def test_deterministic_output(self, data_csv, tmp_path):
        other = tmp_path / "again.csv"
        assert run(["generate", "--coverage", "--seed", "7",
                    "--out", str(other)]) == 0
        assert other.read_bytes() == data_csv.read_bytes()

    def test_explicit_n(self, tmp_path):
        out = tmp_path / "n.csv"
        assert run(["generate", "--n", "33", "--seed", "1",
                    "--out", str(out)]) == 0
        assert len(out.read_text().strip().splitlines()) == 34


class TestClean:
    def test_duplicate_removed_and_logged(self, data_csv, tmp_path):
        lines = data_csv.read_text().splitlines(keepends=True)
        dup = tmp_path / "dup.csv"
        dup.write_text("".join(lines) + lines[1])  # re-insert first data row
        out = tmp_path / "cleaned"
        assert run(["clean", "--data", str(dup), "--out", str(out)]) == 0
        cleaned = (out / "cleaned.csv").read_text().splitlines()
        assert len(cleaned) == 421
        log = [json.loads(l)
               for l in (out / "cleaning_log.jsonl").read_text().splitlines()]
        assert log == [{"row": 420, "reason": "duplicate"}]


class TestTrainEvaluateSelect:
    def test_train_then_evaluate(self, data_csv, tmp_path):
        model_path = tmp_path / "jute_forest.json"
        assert run(["train", "--data", str(data_csv), "--model", "forest",
                    "--crop", "jute", "--trees", "3", "--seed", "5",
                    "--out", str(model_path)]) == 0
        metrics_path = tmp_path / "metrics.json"
        assert run(["evaluate", "--data", str(data_csv), "--seed", "5",
                    str(model_path), "--out", str(metrics_path)]) == 0
        doc = json.loads(metrics_path.read_text())
        entry = doc[str(model_path)]
        assert entry["variant"] == "forest"
        assert entry["crop"] == "Jute"
        assert entry["accuracy_pct"] + entry["error_pct"] == pytest.approx(100.0)

    def test_dnn_train_writes_history(self, data_csv, tmp_path):
        model_path = tmp_path / "dnn.json"
        assert run(["train", "--data", str(data_csv), "--model", "dnn",
                    "--crop", "wheat", "--epochs", "3", "--seed", "5",
                    "--out", str(model_path)]) == 0
        history = (tmp_path / "dnn.json.history.csv").read_text()
        assert history.splitlines()[0] == "epoch,train_mse,val_mse"

    def test_select(self, data_csv, tmp_path):
        model_files = []
        for crop in ("ausrice", "amanrice", "bororice", "wheat", "potato",
                     "jute"):
            path = tmp_path / f"{crop}.json"
            assert run(["train", "--data", str(data_csv), "--model",
                        "logistic", "--crop", crop, "--epochs", "5",
                        "--seed", "5", "--out", str(path)]) == 0
            model_files.append(str(path))
        out = tmp_path / "rec.json"
        assert run(["select", "--data", str(data_csv), "--out", str(out)]
                   + model_files) == 0
        doc = json.loads(out.read_text())
        assert doc["selected"] in {"AusRice", "AmanRice", "BoroRice", "Wheat",
                                   "Potato", "Jute"}
        assert len(doc["predicted_yield_t_ha"]) == 6


class TestReport:
    def test_report_structure(self, data_csv, tmp_path):
        out = tmp_path / "report"
        assert run(["report", "--data", str(data_csv), "--seed", "3",
                    "--epochs", "2", "--trees", "2", "--out", str(out)]) == 0
        text = (out / "report.md").read_text()
        assert text.count(
            "| Method | Training (%) | Testing (%) | Accuracy (%) | MSE (%) |"
        ) == 6
        doc = json.loads((out / "report.json").read_text())
        assert len(doc["crops"]) == 6
        assert len(doc["crops"]["Jute"]) == 4
        assert len(list((out / "models").glob("*.json"))) == 24


class TestPlotData:
    def test_all_kinds_written(self, data_csv, tmp_path):
        out = tmp_path / "plots"
        assert run(["plot-data", "--data", str(data_csv),
                    "--out", str(out)]) == 0
        for kind in ("max_temp", "min_temp", "avg_rainfall", "production",
                     "yield"):
            lines = (out / f"{kind}.csv").read_text().splitlines()
            assert lines[0] == "kind,district,year,crop,value"
            assert len(lines) > 1

    def test_single_kind(self, data_csv, tmp_path):
        out = tmp_path / "one"
        assert run(["plot-data", "--data", str(data_csv), "--kind",
                    "yield", "--out", str(out)]) == 0
        assert (out / "yield.csv").exists()
        assert not (out / "max_temp.csv").exists()


class TestConfig:
    def test_empty_config_gives_defaults(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{}")
        assert load_config(path) == {}
        import argparse
        args = argparse.Namespace(config=str(path))
        cfg = resolve_config(args)
        assert cfg["train_ratio"] == 0.8
        assert cfg["trees"] == 100
        assert cfg["seed"] == 0

    def test_flag_overrides_config_file(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('{"seed": 42}')
        import argparse
        args = argparse.Namespace(config=str(path), seed=7)
        assert resolve_config(args)["seed"] == 7

    def test_config_file_overrides_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("AGROYIELD_SEED", "99")
        path = tmp_path / "c.json"
        path.write_text('{"seed": 42}')
        import argparse
        args = argparse.Namespace(config=str(path))
        assert resolve_config(args)["seed"] == 42

    def test_env_seed_is_lowest_precedence_source(self, monkeypatch):
        monkeypatch.setenv("AGROYIELD_SEED", "99")
        import argparse
        assert resolve_config(argparse.Namespace())["seed"] == 99

    def test_out_of_range_ratio_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('{"train_ratio": 1.5}')
        with pytest.raises(MalformedConfig):
            load_config(path)

    def test_unknown_field_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('{"blastoff": 3}')
        with pytest.raises(MalformedConfig):
            load_config(path)

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{nope")
        with pytest.raises(MalformedConfig):
            load_config(path)


class TestExitCodes:
    def test_unknown_subcommand_is_usage_error(self):
        assert run(["launch-rockets"]) == 1

    def test_missing_flags_is_usage_error(self):
        assert run(["generate"]) == 1

    def test_unreadable_data_is_data_error(self, tmp_path):
        assert run(["clean", "--data", str(tmp_path / "nope.csv"),
                    "--out", str(tmp_path)]) == 2

    def test_bad_header_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,c\n1,2,3\n")
        assert run(["clean", "--data", str(bad), "--out", str(tmp_path)]) == 2

    def test_diverged_training_exit_code(self, data_csv, tmp_path):
        assert run(["train", "--data", str(data_csv), "--model", "dnn",
                    "--crop", "jute", "--epochs", "30", "--lr", "1e18",
                    "--seed", "1", "--out", str(tmp_path / "m.json")]) == 3
