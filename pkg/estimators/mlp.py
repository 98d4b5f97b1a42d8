"""estimators/mlp.py — Shallow neural-network learning module.

A three-layer perceptron with 2D inputs, 4D sigmoid hidden units and 2D
linear outputs.  Complex vectors enter as ``[Re; Im]`` and leave the same
way.  Training is mini-batch Adam on the mean (over samples) squared
Euclidean error of the real outputs, which equals the complex squared error.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import expit

from estimators.base import DimensionMismatchError, Estimator, NonFiniteError

if TYPE_CHECKING:
    from experiments.dataset import TrainingSet

logger = logging.getLogger(__name__)

HIDDEN_FACTOR = 4


@dataclass(frozen=True)
class MlpHyper:
    """Optimizer and initialization settings."""

    batch_size: int = 128
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    max_epochs: int = 2000
    patience: int = 50
    min_improvement: float = 1e-6
    zero_output_init: bool = False
    #: Per-epoch loss on a fixed random subset of this many samples (None: all).
    loss_subsample: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(eq=False)
class MlpParams:
    """Layer weights: ``w1`` (4D, 2D), ``b1`` (4D,), ``w2`` (2D, 4D), ``b2`` (2D,)."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def arrays(self) -> List[np.ndarray]:
        return [self.w1, self.b1, self.w2, self.b2]

    def copy(self) -> "MlpParams":
        return MlpParams(*(a.copy() for a in self.arrays()))


def pack(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h)
    return np.concatenate([h.real, h.imag], axis=-1)


def unpack(v: np.ndarray) -> np.ndarray:
    d = v.shape[-1] // 2
    return v[..., :d] + 1j * v[..., d:]


def _forward(params: MlpParams, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    hidden = expit(x @ params.w1.T + params.b1)
    return hidden, hidden @ params.w2.T + params.b2


def mlp_loss_and_gradients(
    params: MlpParams, x: np.ndarray, t: np.ndarray
) -> Tuple[float, MlpParams]:
    """Loss ``mean_m ||y_m - t_m||^2`` and its gradients by backpropagation."""
    n = x.shape[0]
    hidden, y = _forward(params, x)
    err = y - t
    loss = float(np.sum(err * err) / n)

    dy = 2.0 * err / n
    dw2 = dy.T @ hidden
    db2 = dy.sum(axis=0)
    dz1 = (dy @ params.w2) * hidden * (1.0 - hidden)
    dw1 = dz1.T @ x
    db1 = dz1.sum(axis=0)
    return loss, MlpParams(dw1, db1, dw2, db2)


def _loss(params: MlpParams, x: np.ndarray, t: np.ndarray) -> float:
    _, y = _forward(params, x)
    err = y - t
    return float(np.sum(err * err) / x.shape[0])


def init_mlp(dimension: int, hyper: MlpHyper, rng: np.random.Generator) -> MlpParams:
    """Glorot-uniform weights, zero biases."""
    n_in, n_hidden, n_out = 2 * dimension, HIDDEN_FACTOR * dimension, 2 * dimension

    def glorot(fan_out: int, fan_in: int) -> np.ndarray:
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        return rng.uniform(-limit, limit, size=(fan_out, fan_in))

    w1 = glorot(n_hidden, n_in)
    w2 = np.zeros((n_out, n_hidden)) if hyper.zero_output_init else glorot(n_out, n_hidden)
    return MlpParams(w1, np.zeros(n_hidden), w2, np.zeros(n_out))


class MlpEstimator(Estimator):
    """Trained 2D-4D-2D network; parameters are read-only after construction."""

    name = "mlp"

    def __init__(
        self,
        params: MlpParams,
        hyper: Optional[MlpHyper] = None,
        seed: Optional[int] = None,
        initial_loss: float = float("nan"),
        final_loss: float = float("nan"),
        epochs: int = 0,
    ) -> None:
        n_hidden, n_in = params.w1.shape
        dimension = n_in // 2
        super().__init__(dimension)
        expected = {
            "w1": (HIDDEN_FACTOR * dimension, 2 * dimension),
            "b1": (HIDDEN_FACTOR * dimension,),
            "w2": (2 * dimension, HIDDEN_FACTOR * dimension),
            "b2": (2 * dimension,),
        }
        frozen = []
        for key, array in zip(expected, params.arrays()):
            array = np.array(array, dtype=float)
            if array.shape != expected[key]:
                raise DimensionMismatchError(
                    f"{key} has shape {array.shape}, expected {expected[key]}"
                )
            if not np.all(np.isfinite(array)):
                raise NonFiniteError(f"{key} contains non-finite values")
            array.setflags(write=False)
            frozen.append(array)
        self.params = MlpParams(*frozen)
        self.hyper = hyper or MlpHyper()
        self.seed = seed
        self.initial_loss = initial_loss
        self.final_loss = final_loss
        self.epochs = epochs

    @property
    def layer_sizes(self) -> List[int]:
        d = self.dimension
        return [2 * d, HIDDEN_FACTOR * d, 2 * d]

    def apply(self, h_ls: np.ndarray) -> np.ndarray:
        h_ls = self.check_input(h_ls)
        _, y = _forward(self.params, pack(h_ls))
        return unpack(y)

    def describe(self) -> Dict[str, Any]:
        info = super().describe()
        info.update(
            layer_sizes=self.layer_sizes,
            hyperparameters=self.hyper.to_dict(),
            seed=self.seed,
            initial_loss=self.initial_loss,
            final_loss=self.final_loss,
            epochs=self.epochs,
        )
        return info


def identity_mlp(dimension: int, scale: float = 1e-5) -> MlpEstimator:
    """Network reproducing its input: ``(2/s)(sigmoid(s x) - sigmoid(-s x)) ~= x``."""
    n = 2 * dimension
    eye = np.eye(n)
    w1 = np.vstack([scale * eye, -scale * eye])
    w2 = np.hstack([(2.0 / scale) * eye, -(2.0 / scale) * eye])
    params = MlpParams(w1, np.zeros(2 * n), w2, np.zeros(n))
    return MlpEstimator(params)


def train_mlp(
    training_set: "TrainingSet",
    hyper: Optional[MlpHyper] = None,
    rng: Optional[np.random.Generator] = None,
    seed: Optional[int] = None,
) -> MlpEstimator:
    """Fit a network to the training set with mini-batch Adam.

    Training stops after ``max_epochs`` or once the monitored training loss has
    not improved by ``min_improvement`` for ``patience`` epochs.  The monitored
    loss is taken over the whole set, or over ``loss_subsample`` samples drawn
    once before the first epoch.  The parameters with the lowest monitored loss
    are returned, so the final loss never exceeds the initial one.
    """
    hyper = hyper or MlpHyper()
    if rng is None:
        rng = np.random.default_rng(seed)
    x = pack(np.asarray(training_set.inputs, dtype=np.complex128))
    t = pack(np.asarray(training_set.labels, dtype=np.complex128))
    if x.shape != t.shape or x.ndim != 2 or x.shape[0] < 1:
        raise DimensionMismatchError(f"inputs {x.shape} and labels {t.shape} differ")
    m, dimension = x.shape[0], x.shape[1] // 2

    params = init_mlp(dimension, hyper, rng)
    first = [np.zeros_like(a) for a in params.arrays()]
    second = [np.zeros_like(a) for a in params.arrays()]

    x_mon, t_mon = x, t
    if hyper.loss_subsample is not None and hyper.loss_subsample < m:
        if hyper.loss_subsample < 1:
            raise ValueError(f"loss_subsample must be positive, got {hyper.loss_subsample}")
        monitor = np.sort(rng.choice(m, size=hyper.loss_subsample, replace=False))
        x_mon, t_mon = x[monitor], t[monitor]

    initial = _loss(params, x_mon, t_mon)
    if not math.isfinite(initial):
        raise NonFiniteError("initial training loss is not finite")
    best, best_params = initial, params.copy()
    reference, stale, step, epoch = initial, 0, 0, 0

    for epoch in range(1, hyper.max_epochs + 1):
        order = rng.permutation(m)
        for start in range(0, m, hyper.batch_size):
            batch = order[start:start + hyper.batch_size]
            _, grads = mlp_loss_and_gradients(params, x[batch], t[batch])
            step += 1
            correction1 = 1.0 - hyper.beta1 ** step
            correction2 = 1.0 - hyper.beta2 ** step
            for p, g, m1, m2 in zip(params.arrays(), grads.arrays(), first, second):
                m1 *= hyper.beta1
                m1 += (1.0 - hyper.beta1) * g
                m2 *= hyper.beta2
                m2 += (1.0 - hyper.beta2) * g * g
                p -= hyper.learning_rate * (m1 / correction1) / (
                    np.sqrt(m2 / correction2) + hyper.adam_eps
                )

        loss = _loss(params, x_mon, t_mon)
        if not math.isfinite(loss):
            raise NonFiniteError(
                f"training loss diverged at epoch {epoch} "
                f"(learning_rate={hyper.learning_rate:g})"
            )
        if loss < best:
            best, best_params = loss, params.copy()
        if best < reference - hyper.min_improvement:
            reference, stale = best, 0
        else:
            stale += 1
        if epoch % 100 == 0:
            logger.debug("mlp epoch %d loss=%.6g best=%.6g", epoch, loss, best)
        if stale >= hyper.patience:
            break

    logger.info(
        "Trained MLP D=%d on M=%d samples: loss %.4g -> %.4g in %d epochs",
        dimension, m, initial, best, epoch,
    )
    return MlpEstimator(
        best_params,
        hyper=hyper,
        seed=seed,
        initial_loss=initial,
        final_loss=best,
        epochs=epoch,
    )
