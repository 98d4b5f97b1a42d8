"""interface/dispatcher.py — Runner registry for the command line.

The dispatcher holds :class:`~experiments.base.BaseRunner` instances keyed by
command name and turns any exception a runner raises into a failed
:class:`~experiments.base.RunResult`.
"""

from __future__ import annotations

import logging
from typing import Dict, Optional

from experiments.base import BaseRunner, RunResult

logger = logging.getLogger(__name__)


class Dispatcher:
    """Registry and router for experiment runners."""

    def __init__(self) -> None:
        self._runners: Dict[str, BaseRunner] = {}

    # ------------------------------------------------------------------
    # Registry
    # ------------------------------------------------------------------

    def register(self, runner: BaseRunner) -> None:
        """Register *runner* under its :attr:`~experiments.base.BaseRunner.name`."""
        if not runner.name:
            raise ValueError(f"Runner {type(runner).__name__} has no name set.")
        self._runners[runner.name] = runner
        logger.debug("Dispatcher: registered runner '%s'", runner.name)

    def get(self, name: str) -> Optional[BaseRunner]:
        return self._runners.get(name)

    def available_runners(self) -> Dict[str, str]:
        """Mapping of command name to description."""
        return {name: r.description for name, r in self._runners.items()}

    # ------------------------------------------------------------------
    # Dispatch
    # ------------------------------------------------------------------

    def dispatch(self, name: str, **kwargs) -> RunResult:
        """Run the named runner with the provided keyword arguments."""
        runner = self._runners.get(name)
        if runner is None:
            return RunResult(success=False, name=name, error=f"Unknown command: '{name}'")
        try:
            result = runner.run(**kwargs)
        except Exception as exc:
            logger.exception("Runner '%s' raised an exception", name)
            return RunResult(success=False, name=name, error=f"{type(exc).__name__}: {exc}")
        failed = [c for c in result.checks if not c.passed]
        for c in failed:
            logger.warning("%s", c)
        return result


# ---------------------------------------------------------------------------
# Default dispatcher — registers every runner
# ---------------------------------------------------------------------------

def _build_default_dispatcher() -> Dispatcher:
    from experiments.alpha_curve import AlphaCurveRunner
    from experiments.alpha_vs_k import AlphaVsKRunner
    from experiments.alpha_vs_m import AlphaVsMRunner
    from experiments.dnn_quasi import DnnQuasiRunner
    from experiments.lemma_check import LemmaCheckRunner
    from experiments.linear_vs_lmmse import LinearVsLmmseRunner
    from experiments.loss_densities import LossDensitiesRunner
    from experiments.partition import PartitionRunner
    from experiments.validate import ValidateRunner

    dispatcher = Dispatcher()
    for runner in (
        AlphaCurveRunner(),
        LossDensitiesRunner(),
        LinearVsLmmseRunner(),
        AlphaVsKRunner(),
        AlphaVsMRunner(),
        DnnQuasiRunner(),
        PartitionRunner(),
        LemmaCheckRunner(),
        ValidateRunner(),
    ):
        dispatcher.register(runner)
    return dispatcher


_dispatcher: Optional[Dispatcher] = None


def get_dispatcher() -> Dispatcher:
    """Return the module-level :class:`Dispatcher` singleton."""
    global _dispatcher
    if _dispatcher is None:
        _dispatcher = _build_default_dispatcher()
    return _dispatcher
