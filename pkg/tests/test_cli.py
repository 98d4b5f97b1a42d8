"""tests/test_cli.py — End-to-end tests of the command-line entry point."""

from __future__ import annotations

import json

import numpy as np
import pytest

from estimators.linear import LinearEstimator
from estimators.serialization import from_json
from interface.cli import EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK, main


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    for key in ("CHANEST_SEED", "CHANEST_WORKERS", "CHANEST_OUT", "CHANEST_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)


def _alpha_curve(out, *extra):
    return main(["alpha-curve", "--kappa", "1000:1400:200", "--out", str(out), "--workers", "1", *extra])


def _linear(out, workers, *extra):
    return main([
        "linear-vs-lmmse", "--k", "4", "--snr", "0,10", "--trials", "25000",
        "--workers", str(workers), "--out", str(out), *extra,
    ])


class TestArtifacts:
    def test_writes_csv_and_metadata(self, tmp_path, capsys):
        assert _alpha_curve(tmp_path / "out") == EXIT_OK
        lines = (tmp_path / "out" / "alpha-curve.csv").read_text().splitlines()
        assert lines[0] == "kappa,alpha,epsilon"
        assert len(lines) == 4
        assert lines[2].startswith("1200,")

        meta = json.loads((tmp_path / "out" / "alpha-curve.json").read_text())
        assert meta["command"] == "alpha-curve"
        assert meta["runner"]["name"] == "alpha-curve"
        assert meta["seed"] == 1
        assert "workers" not in meta["config"]
        assert all(c["passed"] for c in meta["checks"])
        assert "alpha-curve" in capsys.readouterr().out

    def test_reruns_are_byte_identical(self, tmp_path):
        assert _alpha_curve(tmp_path / "a", "--plot") == EXIT_OK
        assert _alpha_curve(tmp_path / "b", "--plot") == EXIT_OK
        for name in ("alpha-curve.csv", "alpha-curve.json", "alpha-curve.svg"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_plot_only_on_request(self, tmp_path):
        _alpha_curve(tmp_path / "plain")
        assert not (tmp_path / "plain" / "alpha-curve.svg").exists()
        _alpha_curve(tmp_path / "plotted", "--plot")
        assert (tmp_path / "plotted" / "alpha-curve.svg").read_text().lstrip().startswith("<?xml")

    def test_simulation_identical_across_worker_counts(self, tmp_path):
        assert _linear(tmp_path / "one", 1) == EXIT_OK
        assert _linear(tmp_path / "two", 2) == EXIT_OK
        for name in ("linear-vs-lmmse.csv", "linear-vs-lmmse.json"):
            assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()


class TestEstimatorDocuments:
    def test_saved_estimators_reload(self, tmp_path):
        out = tmp_path / "est"
        assert _linear(out, 1, "--save-estimators") == EXIT_OK
        saved = sorted(p.name for p in out.glob("linear-vs-lmmse-*.json"))
        assert saved == ["linear-vs-lmmse-trained-k4-0db.json", "linear-vs-lmmse-trained-k4-10db.json"]

        text = (out / saved[0]).read_text()
        restored = from_json(text)
        assert isinstance(restored, LinearEstimator)
        assert restored.dimension == 4
        assert json.loads(text)["type"] == "linear"
        again = from_json(json.dumps(json.loads(text)))
        assert np.array_equal(again.weights.matrix, restored.weights.matrix)

    def test_not_written_by_default(self, tmp_path):
        assert _linear(tmp_path / "plain", 1) == EXIT_OK
        assert sorted(p.name for p in (tmp_path / "plain").iterdir()) == ["linear-vs-lmmse.csv", "linear-vs-lmmse.json"]

    def test_fig5_alias_writes_canonical_names(self, tmp_path):
        code = main([
            "fig5", "--k", "4", "--snr", "0", "--trials", "2000", "--workers", "1",
            "--out", str(tmp_path / "o"),
        ])
        assert code == EXIT_OK
        assert (tmp_path / "o" / "linear-vs-lmmse.csv").exists()


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert main(["alpha-curve", "--no-such-flag"]) == EXIT_ERROR
        assert "usage error" in capsys.readouterr().err

    def test_runner_error(self, tmp_path, capsys):
        code = main([
            "partition", "--n", "64", "--k", "32", "--tau-max", "4", "--blocks", "7",
            "--snr", "0", "--m", "50", "--trials", "10", "--out", str(tmp_path / "o"),
        ])
        assert code == EXIT_ERROR
        assert "NonDivisibleError" in capsys.readouterr().err
        assert not (tmp_path / "o" / "partition.csv").exists()

    def test_failed_check(self, tmp_path):
        code = main([
            "linear-vs-lmmse", "--k", "12", "--m", "14", "--snr", "0", "--trials", "2000",
            "--workers", "1", "--out", str(tmp_path / "o"),
        ])
        assert code == EXIT_CHECK_FAILED
        assert (tmp_path / "o" / "linear-vs-lmmse.csv").exists()
