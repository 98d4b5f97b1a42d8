"""estimators/base.py — Abstract base class and errors for channel estimators.

Every estimator maps LS estimates ``h_ls`` (one D-vector, or an (n, D) stack)
to refined estimates of the same shape.  Subclasses set :attr:`name` and
implement :meth:`apply`.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Dict

import numpy as np


class EstimatorError(RuntimeError):
    """Base class for numerical failures while building an estimator."""


class IllConditionedError(EstimatorError):
    """The regularized correlation matrix is not positive definite."""


class RankDeficientError(EstimatorError):
    """The training Gram matrix cannot be factorized (too few / degenerate samples)."""


class NonFiniteError(EstimatorError):
    """Training produced a NaN or infinite loss."""


class DimensionMismatchError(ValueError):
    """Input vector length does not match the estimator's dimension."""


class Estimator(ABC):
    """Abstract base class for all channel estimators."""

    #: Short identifier used in reports and serialized documents.
    name: str = ""

    def __init__(self, dimension: int) -> None:
        if dimension < 1:
            raise ValueError(f"dimension must be positive, got {dimension}")
        self.dimension = int(dimension)

    @abstractmethod
    def apply(self, h_ls: np.ndarray) -> np.ndarray:
        """Return refined estimates with the same shape as *h_ls*."""

    def check_input(self, h_ls: np.ndarray) -> np.ndarray:
        h_ls = np.asarray(h_ls)
        if h_ls.ndim not in (1, 2) or h_ls.shape[-1] != self.dimension:
            raise DimensionMismatchError(
                f"{self.name or type(self).__name__} expects vectors of length "
                f"{self.dimension}, got shape {h_ls.shape}"
            )
        return h_ls

    def describe(self) -> Dict[str, Any]:
        return {"type": self.name, "dimension": self.dimension}


class LsIdentity(Estimator):
    """The LS estimate passed through unchanged."""

    name = "ls"

    def apply(self, h_ls: np.ndarray) -> np.ndarray:
        return self.check_input(h_ls)


def apply_estimator(estimator: Estimator, h_ls: np.ndarray) -> np.ndarray:
    """Run *estimator* on *h_ls*; the output always has the input's shape."""
    out = estimator.apply(estimator.check_input(h_ls))
    if out.shape != np.shape(h_ls):
        raise DimensionMismatchError(
            f"{estimator.name} changed shape {np.shape(h_ls)} -> {out.shape}"
        )
    return out
