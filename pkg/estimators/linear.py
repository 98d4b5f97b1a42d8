"""estimators/linear.py — Linear channel estimators.

All linear estimators are a single complex weight matrix ``W`` applied to the
LS estimate: analytic LMMSE (Wiener) weights, the robust LMMSE built from a
worst-case uniform PDP, and weights fitted to a training set by least squares.
Both solves go through a Hermitian positive-definite (Cholesky) factorization.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from channel.ofdm import OfdmConfig, PdpKind, PdpSpec, freq_correlation
from estimators.base import (
    DimensionMismatchError,
    Estimator,
    IllConditionedError,
    RankDeficientError,
)

if TYPE_CHECKING:
    from experiments.dataset import TrainingSet

logger = logging.getLogger(__name__)

# Relative diagonal loading tried once when the Gram factorization fails.
_GRAM_JITTER = 1e-12
# Smallest acceptable squared Cholesky pivot, relative to trace/D.
_GRAM_RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class LinearWeights:
    """A D x D complex weight matrix."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.matrix, dtype=np.complex128)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weights must be a square matrix, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights contain non-finite entries")
        w.setflags(write=False)
        object.__setattr__(self, "matrix", w)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


class LinearEstimator(Estimator):
    """Estimator defined by fixed :class:`LinearWeights`."""

    name = "linear"

    def __init__(self, weights: LinearWeights, name: Optional[str] = None) -> None:
        super().__init__(weights.dimension)
        self.weights = weights
        if name:
            self.name = name

    def apply(self, h_ls: np.ndarray) -> np.ndarray:
        return apply_linear(self.weights, h_ls)


class BlockLinearEstimator(Estimator):
    """One weight matrix per contiguous block of subcarrier positions."""

    name = "block-linear"

    def __init__(self, blocks: Sequence[Tuple[np.ndarray, LinearWeights]], dimension: int) -> None:
        super().__init__(dimension)
        covered = np.concatenate([np.asarray(pos) for pos, _ in blocks])
        if np.sort(covered).tolist() != list(range(dimension)):
            raise ValueError("blocks must partition positions 0..dimension-1 exactly")
        for pos, weights in blocks:
            if len(pos) != weights.dimension:
                raise DimensionMismatchError(
                    f"block of {len(pos)} positions paired with {weights.dimension}x"
                    f"{weights.dimension} weights"
                )
        self.blocks: List[Tuple[np.ndarray, LinearWeights]] = [
            (np.asarray(pos, dtype=np.int64), weights) for pos, weights in blocks
        ]

    def apply(self, h_ls: np.ndarray) -> np.ndarray:
        h_ls = self.check_input(h_ls)
        out = np.empty(h_ls.shape, dtype=np.complex128)
        for pos, weights in self.blocks:
            out[..., pos] = apply_linear(weights, h_ls[..., pos])
        return out

    def as_matrix(self) -> np.ndarray:
        """Equivalent block-diagonal D x D weight matrix."""
        full = np.zeros((self.dimension, self.dimension), dtype=np.complex128)
        for pos, weights in self.blocks:
            full[np.ix_(pos, pos)] = weights.matrix
        return full

    def describe(self) -> Dict[str, Any]:
        info = super().describe()
        info["block_sizes"] = [len(pos) for pos, _ in self.blocks]
        return info


# ---------------------------------------------------------------------------
# Application
# ---------------------------------------------------------------------------

def apply_linear(weights: LinearWeights, h_ls: np.ndarray) -> np.ndarray:
    """``W @ h`` for one vector, or row-wise for an (n, D) stack."""
    h_ls = np.asarray(h_ls)
    if h_ls.ndim not in (1, 2) or h_ls.shape[-1] != weights.dimension:
        raise DimensionMismatchError(
            f"weights are {weights.dimension}x{weights.dimension}, input shape {h_ls.shape}"
        )
    if h_ls.ndim == 1:
        return weights.matrix @ h_ls
    return h_ls @ weights.matrix.T


# ---------------------------------------------------------------------------
# LMMSE
# ---------------------------------------------------------------------------

def _as_hermitian(r_hh: np.ndarray) -> np.ndarray:
    r = np.asarray(r_hh, dtype=np.complex128)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"correlation must be square, got shape {r.shape}")
    return r


def _regularized_factor(r: np.ndarray, sigma2: float):
    try:
        return cho_factor(r + sigma2 * np.eye(r.shape[0]), lower=True)
    except LinAlgError as exc:
        raise IllConditionedError(
            f"R_hh + {sigma2:g} I is not positive definite"
        ) from exc


def lmmse_weights(r_hh: np.ndarray, sigma2: float) -> LinearWeights:
    """Wiener weights ``W = R (R + sigma2 I)^-1``."""
    r = _as_hermitian(r_hh)
    factor = _regularized_factor(r, sigma2)
    return LinearWeights(cho_solve(factor, r).conj().T)


def lmmse_row(r_hh: np.ndarray, sigma2: float, k: int) -> np.ndarray:
    """Single-output weights ``r_{h_k h} (R + sigma2 I)^-1`` for subcarrier *k*."""
    r = _as_hermitian(r_hh)
    factor = _regularized_factor(r, sigma2)
    return cho_solve(factor, r[:, k]).conj()


def robust_lmmse_weights(tau_upper: int, cfg: OfdmConfig, sigma2: float) -> LinearWeights:
    """LMMSE weights designed for a uniform PDP over the worst-case delay."""
    r_uniform = freq_correlation(PdpSpec(PdpKind.UNIFORM, tau_upper), cfg)
    return lmmse_weights(r_uniform, sigma2)


def lmmse_mse_per_subcarrier(r_hh: np.ndarray, sigma2: float) -> np.ndarray:
    """Diagonal of the LMMSE error covariance ``R - W R``."""
    r = _as_hermitian(r_hh)
    w = lmmse_weights(r, sigma2).matrix
    mse = np.real(np.diag(r)) - np.real(np.einsum("kj,jk->k", w, r))
    return np.maximum(mse, 0.0)


def lmmse_mse_theoretical(r_hh: np.ndarray, sigma2: float) -> float:
    """Average per-subcarrier MSE of the LMMSE estimator."""
    return float(np.mean(lmmse_mse_per_subcarrier(r_hh, sigma2)))


def linear_mse_exact(weights: np.ndarray, r_hh: np.ndarray, sigma2: float) -> float:
    """Exact per-subcarrier MSE of ``W h_ls`` under correlation R and noise sigma2.

    ``(1/K) tr[(W - I) R (W - I)^H + sigma2 W W^H]``
    """
    w = weights.matrix if isinstance(weights, LinearWeights) else np.asarray(weights)
    r = _as_hermitian(r_hh)
    if w.shape != r.shape:
        raise DimensionMismatchError(f"weights {w.shape} vs correlation {r.shape}")
    delta = w - np.eye(w.shape[0])
    bias = np.real(np.sum((delta @ r) * delta.conj()))
    noise = sigma2 * np.sum(np.abs(w) ** 2)
    return float((bias + noise) / w.shape[0])


class PerRealizationLmmse:
    """LMMSE that knows each realization's maximum delay.

    Reference for quasi-stationary channels: applies the Wiener weights of the
    PDP that actually generated each vector.
    """

    name = "lmmse-per-realization"

    def __init__(self, cfg: OfdmConfig, kind: PdpKind, sigma2: float) -> None:
        self.cfg = cfg
        self.kind = PdpKind(kind)
        self.sigma2 = sigma2
        self.dimension = cfg.usable_count
        self._weights: Dict[int, LinearWeights] = {}

    def weights_for(self, tau_max: int) -> LinearWeights:
        if tau_max not in self._weights:
            r_hh = freq_correlation(PdpSpec(self.kind, tau_max), self.cfg)
            self._weights[tau_max] = lmmse_weights(r_hh, self.sigma2)
        return self._weights[tau_max]

    def apply(self, h_ls: np.ndarray, taus: np.ndarray) -> np.ndarray:
        h_ls = np.asarray(h_ls)
        out = np.empty(h_ls.shape, dtype=np.complex128)
        for tau in np.unique(taus):
            mask = taus == tau
            out[mask] = apply_linear(self.weights_for(int(tau)), h_ls[mask])
        return out


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------

def _factor_gram(gram: np.ndarray):
    d = gram.shape[0]
    scale = float(np.real(np.trace(gram))) / d
    if not np.isfinite(scale) or scale <= 0:
        raise RankDeficientError("training inputs are all zero or non-finite")
    for jitter in (0.0, _GRAM_JITTER * scale):
        try:
            factor = cho_factor(gram + jitter * np.eye(d), lower=True)
        except LinAlgError:
            logger.debug("Gram factorization failed with jitter=%g", jitter)
            continue
        pivots = np.abs(np.diag(factor[0])) ** 2
        if pivots.min() < _GRAM_RANK_TOL * scale:
            break
        return factor
    raise RankDeficientError(f"{d}x{d} Gram matrix of the training inputs is singular")


def train_linear(training_set: "TrainingSet") -> LinearWeights:
    """Least-squares weights minimizing ``sum_m ||W h_ls(m) - h(m)||^2``.

    Solves the normal equations ``W G = C`` with ``G = sum_m h_ls h_ls^H`` and
    ``C = sum_m h h_ls^H`` through a Cholesky factorization of ``G``.
    """
    x = np.asarray(training_set.inputs, dtype=np.complex128)
    y = np.asarray(training_set.labels, dtype=np.complex128)
    if x.shape != y.shape or x.ndim != 2:
        raise DimensionMismatchError(f"inputs {x.shape} and labels {y.shape} differ")
    m, d = x.shape
    if m < d:
        raise RankDeficientError(f"{m} samples cannot determine a {d}x{d} weight matrix")

    gram = x.T @ x.conj()
    cross = y.T @ x.conj()
    factor = _factor_gram(gram)
    return LinearWeights(cho_solve(factor, cross.conj().T).conj().T)
