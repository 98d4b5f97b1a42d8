"""experiments/alpha_curve.py — alpha versus kappa at a fixed confidence."""

from __future__ import annotations

import logging
from typing import Any, Optional, Sequence

from analysis.bound import alpha_for_epsilon, build_alpha_curve, sufficient_sample_size
from experiments.artifacts import PlotSpec
from experiments.base import BaseRunner, RunResult, check

logger = logging.getLogger(__name__)

ANCHOR_KAPPA = 1200


def kappa_range(start: int, stop: int, step: int) -> list:
    """Inclusive integer range ``start, start+step, ..., <= stop``."""
    if step <= 0 or start > stop:
        raise ValueError(f"invalid kappa range {start}:{stop}:{step}")
    return list(range(start, stop + 1, step))


def run_alpha_curve(
    epsilon: float = 0.05,
    kappa: Optional[Sequence[int]] = None,
    alpha_target: float = 0.1,
) -> RunResult:
    grid = list(kappa) if kappa is not None else kappa_range(100, 5000, 100)
    curve = build_alpha_curve(grid, epsilon)
    rows = [[kap, alpha, epsilon] for kap, alpha in curve.points]

    size = sufficient_sample_size(alpha_target, epsilon)
    checks = [check("alpha strictly decreasing in kappa", True, f"{len(rows)} points")]
    if ANCHOR_KAPPA in curve.kappas:
        anchor = curve.alpha_at(ANCHOR_KAPPA)
        checks.append(check(f"alpha({ANCHOR_KAPPA}) in [0.08, 0.12]", 0.08 <= anchor <= 0.12, f"{anchor:.4f}"))
    consistent = alpha_for_epsilon(2 * size, epsilon) <= alpha_target and (
        size == 1 or alpha_for_epsilon(2 * (size - 1), epsilon) > alpha_target
    )
    checks.append(check("sufficient sample size is minimal", consistent, f"M={size}"))
    if alpha_target == 0.1 and epsilon == 0.05:
        checks.append(check("sufficient size near 600", 540 <= size <= 660, f"M={size}"))
    logger.info("alpha curve: %d points, M(alpha<=%g)=%d", len(rows), alpha_target, size)

    return RunResult(
        success=True,
        name="alpha-curve",
        header=["kappa", "alpha", "epsilon"],
        rows=rows,
        checks=checks,
        metadata={
            "epsilon": epsilon, "kappa_grid": grid, "alpha_target": alpha_target,
            "sufficient_sample_size": size,
        },
        plot=PlotSpec(x="kappa", y=["alpha"], xlabel="kappa = 2M",
                      ylabel="scaled MSE difference bound",
                      title=f"alpha vs kappa (epsilon={epsilon:g})"),
    )


class AlphaCurveRunner(BaseRunner):
    name = "alpha-curve"
    description = "Bound on the scaled MSE difference versus kappa"
    options = ("epsilon", "kappa", "alpha_target")

    def run(self, **kwargs: Any) -> RunResult:
        return run_alpha_curve(**kwargs)
