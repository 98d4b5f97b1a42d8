"""tests/test_config.py — Unit tests for command-line and file configuration."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from interface.config import RunConfig, UsageError, parse_config


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in ("CHANEST_SEED", "CHANEST_WORKERS", "CHANEST_OUT", "CHANEST_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)


class TestParseConfig:
    def test_flags(self):
        cfg = parse_config(["alpha-curve", "--epsilon", "0.05", "--seed", "7", "--workers", "2"])
        assert cfg.command == "alpha-curve"
        assert cfg.seed == 7
        assert cfg.workers == 2
        assert cfg.overrides == {"epsilon": 0.05}

    def test_defaults(self):
        cfg = parse_config(["validate"])
        assert cfg.seed == 1
        assert cfg.out == Path("results")
        assert cfg.plot is False
        assert cfg.overrides == {}

    def test_kappa_range(self):
        cfg = parse_config(["alpha-curve", "--kappa", "100:500:200"])
        assert cfg.overrides["kappa"] == [100, 300, 500]

    def test_lists(self):
        cfg = parse_config(["linear-vs-lmmse", "--k", "4,8", "--snr=-10,0,10", "--tau-max", "2"])
        assert cfg.overrides == {"k": [4, 8], "snr": [-10.0, 0.0, 10.0], "tau_max": 2}

    def test_bool_flag(self):
        assert parse_config(["validate", "--quick"]).overrides == {"quick": True}
        assert parse_config(["validate", "--plot"]).plot is True

    def test_unknown_flag(self):
        with pytest.raises(UsageError):
            parse_config(["alpha-curve", "--frobnicate", "1"])

    def test_flag_of_other_command(self):
        with pytest.raises(UsageError):
            parse_config(["alpha-curve", "--blocks", "60"])

    def test_unknown_command(self):
        with pytest.raises(UsageError):
            parse_config(["no-such-command"])

    def test_bad_value(self):
        with pytest.raises(UsageError) as exc:
            parse_config(["partition", "--m", "many"])
        assert "--m" in str(exc.value)

    def test_bad_seed_and_workers(self):
        with pytest.raises(UsageError):
            parse_config(["validate", "--seed", "-1"])
        with pytest.raises(UsageError):
            parse_config(["validate", "--workers", "0"])

    def test_fig5_alias(self):
        cfg = parse_config(["fig5", "--k", "4", "--snr", "0"])
        assert cfg.command == "linear-vs-lmmse"
        assert cfg.overrides == {"k": [4], "snr": [0.0]}

    def test_save_estimators_flag(self):
        assert parse_config(["partition"]).save_estimators is False
        cfg = parse_config(["partition", "--save-estimators"])
        assert cfg.save_estimators is True
        assert "save_estimators" not in cfg.overrides

    def test_mlp_training_caps(self):
        cfg = parse_config(["dnn-quasi", "--max-epochs", "40", "--batch-size", "512"])
        assert cfg.overrides == {"max_epochs": 40, "batch_size": 512}


class TestPrecedence:
    def test_file_then_flags(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"m": 300, "blocks": [30, 60], "seed": 5}))
        cfg = parse_config(["partition", "--config", str(path), "--m", "1200"])
        assert cfg.overrides["m"] == 1200
        assert cfg.overrides["blocks"] == [30, 60]
        assert cfg.seed == 5

    def test_environment_below_file(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CHANEST_SEED", "3")
        monkeypatch.setenv("CHANEST_OUT", str(tmp_path / "env-out"))
        assert parse_config(["validate"]).seed == 3
        assert parse_config(["validate"]).out == tmp_path / "env-out"

        path = tmp_path / "run.json"
        path.write_text(json.dumps({"seed": 4}))
        assert parse_config(["validate", "--config", str(path)]).seed == 4

    def test_unknown_file_key(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"blocks": [60]}))
        with pytest.raises(UsageError) as exc:
            parse_config(["alpha-curve", "--config", str(path)])
        assert "blocks" in str(exc.value)

    def test_invalid_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("[1, 2")
        with pytest.raises(UsageError):
            parse_config(["validate", "--config", str(path)])

    def test_missing_file(self, tmp_path):
        with pytest.raises(UsageError):
            parse_config(["validate", "--config", str(tmp_path / "absent.json")])


class TestRunnerKwargs:
    def test_filters_to_runner_options(self):
        cfg = RunConfig(command="alpha-curve", seed=9, workers=4, overrides={"epsilon": 0.1})
        assert cfg.runner_kwargs(("epsilon", "kappa")) == {"epsilon": 0.1}
        assert cfg.runner_kwargs(("epsilon", "seed", "workers")) == {"epsilon": 0.1, "seed": 9, "workers": 4}
