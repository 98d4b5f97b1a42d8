"""interface/cli.py — Command-line entry point.

Run with:
    python -m interface.cli <command> [options]

Each command writes ``<out>/<command>.csv`` and a ``.json`` metadata sidecar.
``--plot`` adds an ``.svg`` plot and ``--save-estimators`` one
``<out>/<command>-<label>.json`` document per trained estimator.  Exit status
is 0 when every artifact was written and every in-run check passed, 1 on a
usage or runner error, and 2 when a check failed.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

# Ensure repo root is on the path when run directly
_ROOT = Path(__file__).resolve().parent.parent
if str(_ROOT) not in sys.path:
    sys.path.insert(0, str(_ROOT))

from dotenv import load_dotenv  # noqa: E402

from experiments.artifacts import write_csv, write_estimator, write_metadata, write_plot  # noqa: E402
from interface.config import RunConfig, UsageError, parse_config  # noqa: E402
from interface.dispatcher import get_dispatcher  # noqa: E402

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CHECK_FAILED = 2


def run(config: RunConfig) -> int:
    """Execute *config* and write its artifacts; returns the exit status."""
    dispatcher = get_dispatcher()
    runner = dispatcher.get(config.command)
    if runner is None:
        print(f"error: unknown command '{config.command}'", file=sys.stderr)
        return EXIT_ERROR

    kwargs = config.runner_kwargs(runner.options)
    logger.info("Running %s (%s) with %s", runner.name, runner.description, kwargs)
    result = dispatcher.dispatch(config.command, **kwargs)
    if not result.success:
        print(f"error: {config.command}: {result.error}", file=sys.stderr)
        return EXIT_ERROR

    out = Path(config.out)
    stem = config.command
    try:
        write_csv(out / f"{stem}.csv", result.header, result.rows)
        write_metadata(out / f"{stem}.json", {
            "command": config.command,
            "runner": runner.describe(),
            "seed": config.seed,
            "config": {k: v for k, v in kwargs.items() if k != "workers"},
            "result": result.metadata,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in result.checks],
        })
        if config.plot and result.plot is not None:
            write_plot(out / f"{stem}.svg", result.header, result.rows, result.plot)
        if config.save_estimators:
            for label, estimator in sorted(result.estimators.items()):
                write_estimator(out / f"{stem}-{label}.json", estimator)
    except OSError as exc:
        print(f"error: cannot write to {out}: {exc}", file=sys.stderr)
        return EXIT_ERROR

    print(result)
    if not result.checks_passed:
        failed = sum(not c.passed for c in result.checks)
        print(f"{failed} check(s) failed", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    logging.basicConfig(
        format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
        level=getattr(logging, config.log_level, logging.INFO),
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
