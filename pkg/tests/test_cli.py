import json

import pytest
from click.testing import CliRunner

from sketchduel.cli import cli

CATEGORIES = "line,circle,square,tshape"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def corpus(tmp_path, runner):
    path = tmp_path / "corpus.ndjson"
    result = runner.invoke(cli, ["synth", "--categories", CATEGORIES,
                                 "--per-category", "25", "--seed", "9",
                                 "--out", str(path)])
    assert result.exit_code == 0, result.output
    return path


class TestSynth:
    def test_writes_requested_counts(self, corpus):
        assert sum(1 for _ in corpus.open()) == 100

    def test_deterministic_per_seed(self, tmp_path, runner):
        a, b = tmp_path / "a.ndjson", tmp_path / "b.ndjson"
        for path in (a, b):
            result = runner.invoke(cli, ["synth", "--categories", "star,plus",
                                         "--per-category", "10", "--seed", "4",
                                         "--out", str(path)])
            assert result.exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_unknown_category_usage_error(self, tmp_path, runner):
        result = runner.invoke(cli, ["synth", "--categories", "unicorn",
                                     "--out", str(tmp_path / "x.ndjson")])
        assert result.exit_code == 2
        assert "unicorn" in result.output

    def test_reingests_with_zero_skips(self, corpus, runner):
        result = runner.invoke(cli, ["ingest", str(corpus), "--lenient"])
        assert result.exit_code == 0
        assert "skipped" not in result.output


class TestIngest:
    def test_prints_per_category_table(self, corpus, runner):
        result = runner.invoke(cli, ["ingest", str(corpus)])
        assert result.exit_code == 0
        for word in CATEGORIES.split(","):
            assert word in result.output
        assert "100" in result.output

    def test_cap_is_applied(self, corpus, runner):
        result = runner.invoke(cli, ["ingest", str(corpus), "--cap", "10"])
        assert result.exit_code == 0
        assert "40" in result.output

    def test_malformed_line_fails_naming_position(self, tmp_path, runner,
                                                  corpus):
        bad = tmp_path / "bad.ndjson"
        lines = corpus.read_text().splitlines()
        bad.write_text("\n".join(lines[:2] + ["BROKEN"] + lines[2:4]) + "\n")
        result = runner.invoke(cli, ["ingest", str(bad)])
        assert result.exit_code == 1
        assert ":3" in result.output

    def test_lenient_skips(self, tmp_path, runner, corpus):
        bad = tmp_path / "bad.ndjson"
        lines = corpus.read_text().splitlines()
        bad.write_text("\n".join(lines[:3] + ["BROKEN"]) + "\n")
        result = runner.invoke(cli, ["ingest", str(bad), "--lenient"])
        assert result.exit_code == 0
        assert "skipped 1" in result.output

    def test_missing_file_usage_error(self, runner):
        result = runner.invoke(cli, ["ingest", "nope.ndjson"])
        assert result.exit_code == 2

    def test_reexport_round_trips(self, tmp_path, corpus, runner):
        out = tmp_path / "canon.ndjson"
        result = runner.invoke(cli, ["ingest", str(corpus), "--out", str(out)])
        assert result.exit_code == 0
        again = runner.invoke(cli, ["ingest", str(out)])
        assert again.exit_code == 0


class TestBudgets:
    def test_table_and_json_output(self, tmp_path, corpus, runner):
        out = tmp_path / "budgets.json"
        result = runner.invoke(cli, ["budgets", str(corpus),
                                     "--ink-multiplier", "2.0",
                                     "--out", str(out)])
        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert data["multiplier"] == 2.0
        assert set(data["budgets"]) == set(CATEGORIES.split(","))
        assert all(v > 0 for v in data["budgets"].values())


class TestBuildIndexAndSimulate:
    def test_full_pipeline(self, tmp_path, corpus, runner):
        snapshot = tmp_path / "index.npz"
        result = runner.invoke(cli, ["build-index", str(corpus), "--k", "5",
                                     "--out", str(snapshot)])
        assert result.exit_code == 0, result.output
        assert "100 drawings" in result.output
        assert snapshot.exists()

        report = tmp_path / "report.ndjson"
        result = runner.invoke(cli, [
            "simulate", "--index", str(snapshot), "--data", str(corpus),
            "--strategy", "clean", "--strategy", "noise",
            "--trials", "6", "--seed", "3", "--out", str(report)])
        assert result.exit_code == 0, result.output
        assert "clean" in result.output and "noise" in result.output
        assert sum(1 for _ in report.open()) == 12

    def test_zero_trials_exits_zero(self, tmp_path, corpus, runner):
        snapshot = tmp_path / "index.npz"
        runner.invoke(cli, ["build-index", str(corpus), "--out", str(snapshot)])
        result = runner.invoke(cli, ["simulate", "--index", str(snapshot),
                                     "--data", str(corpus), "--trials", "0"])
        assert result.exit_code == 0
        assert "no trials" in result.output


class TestServe:
    def test_bad_bind_usage_error(self, tmp_path, corpus, runner):
        snapshot = tmp_path / "index.npz"
        runner.invoke(cli, ["build-index", str(corpus), "--out", str(snapshot)])
        result = runner.invoke(cli, ["serve", "--index", str(snapshot),
                                     "--bind", "nonsense"])
        assert result.exit_code == 2
        assert "host:port" in result.output

    def test_unknown_config_key_usage_error(self, tmp_path, corpus, runner):
        snapshot = tmp_path / "index.npz"
        runner.invoke(cli, ["build-index", str(corpus), "--out", str(snapshot)])
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"bogus_knob": 3}')
        result = runner.invoke(cli, ["serve", "--index", str(snapshot),
                                     "--config", str(cfg)])
        assert result.exit_code == 2
        assert "bogus_knob" in result.output


class TestSimulateConfig:
    def test_config_file_supplies_threshold(self, tmp_path, corpus, runner):
        snapshot = tmp_path / "index.npz"
        runner.invoke(cli, ["build-index", str(corpus), "--out", str(snapshot)])
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"confidence_threshold": 0.25, "ink_multiplier": 2.0}')
        result = runner.invoke(cli, ["simulate", "--index", str(snapshot),
                                     "--data", str(corpus), "--trials", "3",
                                     "--config", str(cfg)])
        assert result.exit_code == 0, result.output

    def test_flag_overrides_config(self, tmp_path, corpus, runner):
        snapshot = tmp_path / "index.npz"
        runner.invoke(cli, ["build-index", str(corpus), "--out", str(snapshot)])
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"confidence_threshold": 0.25}')
        result = runner.invoke(cli, ["simulate", "--index", str(snapshot),
                                     "--data", str(corpus), "--trials", "3",
                                     "--threshold", "0.9",
                                     "--config", str(cfg)])
        assert result.exit_code == 0, result.output
