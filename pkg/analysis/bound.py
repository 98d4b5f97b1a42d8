"""analysis/bound.py — Hypothesis-test bound on the learned estimator's MSE.

With M training samples the two training losses are modelled as scaled
chi-square variables with ``kappa = 2M`` degrees of freedom:

    xi1 ~ L1 * chi2(kappa) / kappa      (optimal estimator)
    xi2 ~ L2 * chi2(kappa) / kappa      (learned estimator), L2 = (1 + alpha) L1

``epsilon(kappa, alpha) = P(xi1 >= xi2)`` is the probability that training
would wrongly prefer the worse estimator.  Fixing epsilon and solving for
alpha gives the largest scaled MSE difference the learned estimator can
still hide behind at that sample size.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Tuple

import numpy as np

from analysis.chi2 import chi2_cdf, chi2_pdf

logger = logging.getLogger(__name__)

_GL_NODES = 16
_GL_PANELS = 64
# Half-width of the integration window in standard deviations of chi2(kappa).
_WINDOW_SIGMAS = 12.0
# Extra upper margin so small kappa (heavy right tail) is still covered.
_UPPER_PAD = 40.0
_ALPHA_START = 1e-2
_ALPHA_CEILING = 1e3
_MAX_SAMPLES = 100_000
_MC_CHUNK = 1 << 20


class BracketFailureError(RuntimeError):
    """No bracket containing the root was found within the search range."""


def _check_kappa(kappa: int) -> int:
    if int(kappa) != kappa or kappa < 2 or int(kappa) % 2:
        raise ValueError(f"kappa must be an even integer >= 2, got {kappa}")
    return int(kappa)


@lru_cache(maxsize=1)
def _legendre_rule() -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(_GL_NODES)


def _composite_nodes(lower: float, upper: float) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on [lower, upper]."""
    nodes, weights = _legendre_rule()
    edges = np.linspace(lower, upper, _GL_PANELS + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return x, w


def integration_window(kappa: int) -> Tuple[float, float]:
    spread = _WINDOW_SIGMAS * math.sqrt(2.0 * kappa)
    return max(0.0, kappa - spread), kappa + spread + _UPPER_PAD


# ---------------------------------------------------------------------------
# epsilon(kappa, alpha)
# ---------------------------------------------------------------------------

def epsilon_quadrature(kappa: int, alpha: float) -> float:
    """``integral F(s / (1 + alpha)) p(s) ds`` for chi2(kappa) F and p."""
    kappa = _check_kappa(kappa)
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    x, w = _composite_nodes(*integration_window(kappa))
    integrand = chi2_cdf(x / (1.0 + alpha), kappa) * chi2_pdf(x, kappa)
    return float(np.dot(w, integrand))


def epsilon_monte_carlo(
    kappa: int, alpha: float, n_samples: int, rng: np.random.Generator
) -> Tuple[float, float]:
    """Fraction of independent pairs with ``xi1 >= xi2`` and its binomial std error."""
    kappa = _check_kappa(kappa)
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    hits = 0
    remaining = n_samples
    while remaining:
        n = min(remaining, _MC_CHUNK)
        xi1 = rng.chisquare(kappa, n)
        xi2 = (1.0 + alpha) * rng.chisquare(kappa, n)
        hits += int(np.count_nonzero(xi1 >= xi2))
        remaining -= n
    p = hits / n_samples
    return p, math.sqrt(p * (1.0 - p) / n_samples)


def alpha_for_epsilon(kappa: int, eps_target: float, tol: float = 1e-4) -> float:
    """Solve ``epsilon_quadrature(kappa, alpha) = eps_target`` for alpha.

    Doubles an upper bracket from 0.01 and then bisects to *tol*.

    Raises:
        BracketFailureError: epsilon is still above the target at alpha = 1e3.
    """
    kappa = _check_kappa(kappa)
    if not 0.0 < eps_target < 0.5:
        raise ValueError(f"eps_target must be in (0, 0.5), got {eps_target}")

    lo, hi = 0.0, _ALPHA_START
    while epsilon_quadrature(kappa, hi) > eps_target:
        lo, hi = hi, 2.0 * hi
        if hi > _ALPHA_CEILING:
            raise BracketFailureError(
                f"epsilon({kappa}, alpha) stays above {eps_target} up to alpha={_ALPHA_CEILING:g}"
            )
        logger.debug("alpha bracket for kappa=%d expanded to [%g, %g]", kappa, lo, hi)

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if epsilon_quadrature(kappa, mid) > eps_target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sufficient_sample_size(
    alpha_target: float, eps_target: float, max_samples: int = _MAX_SAMPLES
) -> int:
    """Smallest M with ``alpha_for_epsilon(2M, eps_target) <= alpha_target``."""
    if alpha_target <= 0:
        raise ValueError(f"alpha_target must be positive, got {alpha_target}")

    def meets(m: int) -> bool:
        return alpha_for_epsilon(2 * m, eps_target) <= alpha_target

    if meets(1):
        return 1
    lo, hi = 1, 2
    while not meets(hi):
        lo, hi = hi, 2 * hi
        if hi > max_samples:
            raise BracketFailureError(
                f"alpha={alpha_target} needs more than {max_samples} samples"
            )
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if meets(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# Curve and loss model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaCurve:
    """alpha as a function of kappa at a fixed epsilon."""

    epsilon: float
    points: Tuple[Tuple[int, float], ...]

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        alphas = [a for _, a in self.points]
        if any(b >= a for a, b in zip(alphas, alphas[1:])):
            raise ValueError("alpha must be strictly decreasing along the curve")

    @property
    def kappas(self) -> List[int]:
        return [k for k, _ in self.points]

    @property
    def alphas(self) -> List[float]:
        return [a for _, a in self.points]

    def alpha_at(self, kappa: int) -> float:
        for k, a in self.points:
            if k == kappa:
                return a
        raise KeyError(kappa)


def build_alpha_curve(
    kappa_grid: Iterable[int], eps_target: float, tol: float = 1e-6
) -> AlphaCurve:
    grid = [_check_kappa(k) for k in kappa_grid]
    if not grid:
        raise ValueError("kappa grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("kappa grid must be strictly increasing")
    points = []
    for kappa in grid:
        alpha = alpha_for_epsilon(kappa, eps_target, tol=tol)
        logger.debug("kappa=%d alpha=%.6f", kappa, alpha)
        points.append((kappa, alpha))
    return AlphaCurve(epsilon=eps_target, points=tuple(points))


@dataclass(frozen=True)
class LossModel:
    """Chi-square model of the optimal and learned training losses."""

    kappa: int
    mse_opt: float
    mse_learned: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "kappa", _check_kappa(self.kappa))
        if self.mse_opt <= 0:
            raise ValueError(f"mse_opt must be positive, got {self.mse_opt}")
        if self.mse_learned < self.mse_opt:
            raise ValueError("mse_learned must be >= mse_opt")

    @classmethod
    def from_alpha(cls, kappa: int, alpha: float, mse_opt: float = 1.0) -> "LossModel":
        return cls(kappa, mse_opt, (1.0 + alpha) * mse_opt)

    @property
    def alpha(self) -> float:
        return (self.mse_learned - self.mse_opt) / self.mse_opt

    def pdf_opt(self, x):
        """Density of xi1."""
        scale = self.kappa / self.mse_opt
        return scale * np.asarray(chi2_pdf(scale * np.asarray(x, dtype=float), self.kappa))

    def cdf_learned(self, x):
        """Distribution function of xi2."""
        scale = self.kappa / self.mse_learned
        return np.asarray(chi2_cdf(scale * np.asarray(x, dtype=float), self.kappa))

    def epsilon(self) -> float:
        return epsilon_quadrature(self.kappa, self.alpha)

    def sample(self, n: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        xi1 = self.mse_opt * rng.chisquare(self.kappa, n) / self.kappa
        xi2 = self.mse_learned * rng.chisquare(self.kappa, n) / self.kappa
        return xi1, xi2


def mse_upper_bound(mse_opt: float, kappa: int, eps_target: float) -> float:
    """``L1 (1 + alpha)``: the learned MSE accepted at confidence ``1 - eps``."""
    return mse_opt * (1.0 + alpha_for_epsilon(kappa, eps_target))


def linear_excess_ratio(dimension: int, samples: int) -> float:
    """Expected scaled MSE difference ``D / (M - D)`` of least-squares training.

    Holds for jointly circular Gaussian inputs and labels; infinite when
    ``M <= D``.
    """
    if dimension < 1:
        raise ValueError(f"dimension must be positive, got {dimension}")
    if samples <= dimension:
        return math.inf
    return dimension / (samples - dimension)
