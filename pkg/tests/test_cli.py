from __future__ import annotations

import json
import math

import pytest
from click.testing import CliRunner

from pictutor.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def run_json(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


class TestEvalCommands:
    def test_wer(self, runner, tmp_path):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("a b c\nx y\n", encoding="utf-8")
        hyp.write_text("a x c\nx y\n", encoding="utf-8")
        report = run_json(
            runner, ["eval", "wer", "--ref", str(ref), "--hyp", str(hyp), "--lang", "EN"]
        )
        assert report["pairs"] == 2
        assert report["per_line"] == [pytest.approx(1 / 3), 0.0]
        assert report["wer"] == pytest.approx(1 / 5)

    def test_wer_line_count_mismatch(self, runner, tmp_path):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("a\nb\n", encoding="utf-8")
        hyp.write_text("a\n", encoding="utf-8")
        result = runner.invoke(
            main, ["eval", "wer", "--ref", str(ref), "--hyp", str(hyp)]
        )
        assert result.exit_code != 0

    def test_cer(self, runner, tmp_path):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("ab\n", encoding="utf-8")
        hyp.write_text("b\n", encoding="utf-8")
        report = run_json(runner, ["eval", "cer", "--ref", str(ref), "--hyp", str(hyp)])
        assert report["cer"] == 0.5

    def test_mos(self, runner, tmp_path):
        ratings = tmp_path / "ratings.csv"
        ratings.write_text(
            "item_id,score\nu1,3\nu2,4\nu3,5\n", encoding="utf-8"
        )
        report = run_json(runner, ["eval", "mos", "--ratings", str(ratings)])
        assert report["mean"] == 4.0
        assert report["ci_high"] - report["mean"] == pytest.approx(1.96 / math.sqrt(3))

    def test_elo(self, runner, tmp_path):
        records = tmp_path / "records.jsonl"
        records.write_text(
            '{"model_a": "ours", "model_b": "base", "winner": "A"}\n',
            encoding="utf-8",
        )
        report = run_json(runner, ["eval", "elo", "--records", str(records), "--k", "32"])
        assert report["ratings"]["ours"] == 1516.0
        assert report["ratings"]["base"] == 1484.0
        assert report["win_rates"]["ours"]["win_rate"] == 1.0


class TestAnalyzeAndSimulate:
    def test_simulate_then_analyze(self, runner, tmp_path):
        out = tmp_path / "logs"
        result = runner.invoke(
            main,
            ["simulate", "--out", str(out), "--sessions", "2", "--max-turns", "4"],
            catch_exceptions=False,
        )
        assert result.exit_code == 0, result.output
        assert (out / "cohorts.csv").exists()
        report = run_json(runner, ["analyze", "scaffolds", "--logs", str(out)])
        assert report["total_labels"] > 0
        for cohort in ("HighPerforming", "LowPerforming"):
            body = report["cohorts"][cohort]
            assert body["total"] > 0
            assert sum(body["counts"].values()) == body["total"]
            assert sum(body["percentages"].values()) == pytest.approx(100.0)

    def test_analyze_requires_cohort_csv(self, runner, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        result = runner.invoke(main, ["analyze", "scaffolds", "--logs", str(empty)])
        assert result.exit_code != 0
        assert "cohort CSV not found" in result.output
