"""interface/config.py — Command-line and JSON configuration.

Values are resolved in order of increasing precedence: runner defaults,
environment (``CHANEST_*``), the JSON config file, then command-line flags.
Config-file keys are snake_case; the matching flags are kebab-case.
"""

from __future__ import annotations

import argparse
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from experiments.alpha_curve import kappa_range
from interface.dispatcher import get_dispatcher


class UsageError(ValueError):
    """Invalid command line or config file; the message names the offending key."""


# ---------------------------------------------------------------------------
# Value converters (accept JSON-native values or command-line strings)
# ---------------------------------------------------------------------------

def _to_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError("expected an integer")
    if isinstance(value, float) and not value.is_integer():
        raise ValueError("expected an integer")
    return int(value)


def _to_float(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError("expected a number")
    return float(value)


def _to_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes"):
        return True
    if text in ("0", "false", "no"):
        return False
    raise ValueError("expected true or false")


def _split(value: Any) -> List[Any]:
    if isinstance(value, (list, tuple)):
        return list(value)
    if isinstance(value, str):
        return [part for part in (p.strip() for p in value.split(",")) if part]
    return [value]


def _to_int_list(value: Any) -> List[int]:
    items = [_to_int(v) for v in _split(value)]
    if not items:
        raise ValueError("expected a non-empty list")
    return items


def _to_float_list(value: Any) -> List[float]:
    items = [_to_float(v) for v in _split(value)]
    if not items:
        raise ValueError("expected a non-empty list")
    return items


def _to_kappa(value: Any) -> List[int]:
    if isinstance(value, str) and ":" in value:
        parts = value.split(":")
        if len(parts) != 3:
            raise ValueError("expected start:stop:step")
        return kappa_range(*(int(p) for p in parts))
    return _to_int_list(value)


CONVERTERS: Dict[str, Callable[[Any], Any]] = {
    "int": _to_int,
    "float": _to_float,
    "bool": _to_bool,
    "str": str,
    "int_list": _to_int_list,
    "float_list": _to_float_list,
    "kappa": _to_kappa,
}

#: Command-specific keys and their value types.
COMMANDS: Dict[str, Dict[str, str]] = {
    "alpha-curve": {"epsilon": "float", "kappa": "kappa", "alpha_target": "float"},
    "loss-densities": {"kappa": "int", "alpha": "float", "points": "int"},
    "linear-vs-lmmse": {
        "n": "int", "k": "int_list", "m": "int", "tau_max": "int", "snr": "float_list", "trials": "int",
    },
    "alpha-vs-k": {
        "n": "int", "k": "int_list", "m": "int", "tau_max": "int", "snr": "float_list", "trials": "int",
    },
    "alpha-vs-m": {
        "n": "int", "k": "int_list", "m_factors": "float_list", "tau_max": "int", "snr": "float",
        "alpha_target": "float", "trials": "int",
    },
    "dnn-quasi": {
        "n": "int", "k": "int", "tau_set": "int_list", "snr": "float_list", "m": "int",
        "m_large": "int", "trials": "int", "trials_mlp": "int", "max_epochs": "int", "batch_size": "int",
    },
    "partition": {
        "n": "int", "k": "int", "m": "int", "tau_max": "int", "blocks": "int_list",
        "snr": "float_list", "trials": "int",
    },
    "lemma-check": {
        "n": "int", "k": "int", "tau_max": "int", "snr": "float", "m": "int", "trials": "int",
        "subcarrier": "int",
    },
    "validate": {"quick": "bool"},
}

#: Alternative command names, resolved to the canonical command.
ALIASES: Dict[str, str] = {"fig5": "linear-vs-lmmse"}

#: Keys every command accepts.
COMMON: Dict[str, str] = {
    "seed": "int", "workers": "int", "out": "str", "plot": "bool", "log_level": "str",
    "save_estimators": "bool",
}

_HELP = {
    "epsilon": "confidence parameter epsilon",
    "kappa": "kappa grid as start:stop:step or a comma list",
    "snr": "SNR values in dB",
    "k": "usable subcarrier count(s)",
    "n": "DFT size",
    "m": "training-set size",
    "blocks": "partition block sizes",
    "tau_set": "maximum delays drawn per realization",
    "save_estimators": "write each trained estimator as <out>/<command>-<label>.json",
    "max_epochs": "MLP epoch cap",
}


@dataclass
class RunConfig:
    """Resolved configuration for one command."""

    command: str
    seed: int = 1
    workers: int = 1
    out: Path = Path("results")
    plot: bool = False
    save_estimators: bool = False
    log_level: str = "INFO"
    overrides: Dict[str, Any] = field(default_factory=dict)

    def runner_kwargs(self, options: Sequence[str]) -> Dict[str, Any]:
        """Overrides plus seed/workers, restricted to what the runner accepts."""
        kwargs = {"seed": self.seed, "workers": self.workers, **self.overrides}
        return {key: value for key, value in kwargs.items() if key in options}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _flag(key: str) -> str:
    return "--" + key.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chanest", description="Channel-estimation sample-size experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = get_dispatcher().available_runners()
    for command, keys in COMMANDS.items():
        aliases = [alias for alias, target in ALIASES.items() if target == command]
        cmd = sub.add_parser(command, aliases=aliases, help=descriptions.get(command))
        for key, kind in {**keys, **COMMON}.items():
            if kind == "bool":
                cmd.add_argument(_flag(key), dest=key, action="store_true", default=None)
            else:
                cmd.add_argument(_flag(key), dest=key, default=None, help=_HELP.get(key))
        cmd.add_argument("--config", dest="config", default=None, help="JSON config file")
    return parser


def _convert(command: str, key: str, value: Any, source: str) -> Any:
    kind = {**COMMANDS[command], **COMMON}.get(key)
    if kind is None:
        raise UsageError(f"unknown {source} key '{key}' for command '{command}'")
    try:
        return CONVERTERS[kind](value)
    except (TypeError, ValueError) as exc:
        label = _flag(key) if source == "flag" else key
        raise UsageError(f"invalid value for {label}: {value!r} ({exc})") from exc


def _load_file(path: Path) -> Dict[str, Any]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError(f"config file {path} must contain a JSON object")
    return doc


def _env_defaults() -> Dict[str, Any]:
    return {
        "seed": os.getenv("CHANEST_SEED", "1"),
        "workers": os.getenv("CHANEST_WORKERS", str(os.cpu_count() or 1)),
        "out": os.getenv("CHANEST_OUT", "results"),
        "log_level": os.getenv("CHANEST_LOG_LEVEL", "INFO"),
    }


def parse_config(argv: Sequence[str], config_file: Optional[Path] = None) -> RunConfig:
    """Resolve *argv* (and an optional JSON file) into a :class:`RunConfig`.

    Raises:
        UsageError: unknown flag or key, or a value of the wrong type.
    """
    args = vars(build_parser().parse_args(list(argv)))
    name = args.pop("command")
    command = ALIASES.get(name, name)
    file_path = config_file or args.pop("config", None)
    args.pop("config", None)

    merged: Dict[str, Any] = {}
    for key, value in _env_defaults().items():
        merged[key] = _convert(command, key, value, "environment")
    if file_path:
        for key, value in _load_file(Path(file_path)).items():
            merged[key] = _convert(command, key, value, "config file")
    for key, value in args.items():
        if value is not None:
            merged[key] = _convert(command, key, value, "flag")

    seed = merged.pop("seed")
    if not 0 <= seed < 2**64:
        raise UsageError(f"invalid value for --seed: {seed} (must fit in 64 unsigned bits)")
    workers = merged.pop("workers")
    if workers < 1:
        raise UsageError(f"invalid value for --workers: {workers} (must be >= 1)")
    return RunConfig(
        command=command,
        seed=seed,
        workers=workers,
        out=Path(merged.pop("out")),
        plot=bool(merged.pop("plot", False)),
        save_estimators=bool(merged.pop("save_estimators", False)),
        log_level=str(merged.pop("log_level")).upper(),
        overrides=merged,
    )
