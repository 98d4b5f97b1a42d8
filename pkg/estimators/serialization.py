"""estimators/serialization.py — JSON documents for trained estimators.

Document fields: ``type``, ``dimension``, ``weights``, ``hyperparameters``
and ``seed``.  Complex entries are ``[re, im]`` pairs, matrices are nested
row-major lists.  Python's shortest round-trip float repr is used, so a
document reloads to bit-identical parameters.
"""

from __future__ import annotations

import json
from typing import Any, Dict, List, Optional

import numpy as np

from estimators.base import Estimator, LsIdentity
from estimators.linear import BlockLinearEstimator, LinearEstimator, LinearWeights
from estimators.mlp import MlpEstimator, MlpHyper, MlpParams


class SerializationError(ValueError):
    """Malformed or unsupported estimator document."""


def _complex_to_json(matrix: np.ndarray) -> List[Any]:
    pairs = np.stack([matrix.real, matrix.imag], axis=-1)
    return pairs.tolist()


def _complex_from_json(data: List[Any]) -> np.ndarray:
    pairs = np.asarray(data, dtype=float)
    return pairs[..., 0] + 1j * pairs[..., 1]


def to_document(estimator: Estimator) -> Dict[str, Any]:
    """Build the JSON-ready dict for *estimator*."""
    doc: Dict[str, Any] = {
        "type": estimator.name,
        "dimension": estimator.dimension,
        "weights": None,
        "hyperparameters": None,
        "seed": None,
    }
    if isinstance(estimator, LinearEstimator):
        doc["type"] = "linear"
        doc["weights"] = _complex_to_json(estimator.weights.matrix)
    elif isinstance(estimator, BlockLinearEstimator):
        doc["weights"] = [
            {"positions": pos.tolist(), "matrix": _complex_to_json(w.matrix)}
            for pos, w in estimator.blocks
        ]
    elif isinstance(estimator, MlpEstimator):
        p = estimator.params
        doc["weights"] = {
            "w1": p.w1.tolist(),
            "b1": p.b1.tolist(),
            "w2": p.w2.tolist(),
            "b2": p.b2.tolist(),
        }
        doc["hyperparameters"] = estimator.hyper.to_dict()
        doc["seed"] = estimator.seed
        doc["initial_loss"] = estimator.initial_loss
        doc["final_loss"] = estimator.final_loss
        doc["epochs"] = estimator.epochs
    elif not isinstance(estimator, LsIdentity):
        raise SerializationError(f"cannot serialize estimator of type {type(estimator).__name__}")
    return doc


def from_document(doc: Dict[str, Any]) -> Estimator:
    """Rebuild an estimator from :func:`to_document` output."""
    try:
        kind = doc["type"]
        dimension = int(doc["dimension"])
        weights = doc.get("weights")
    except (KeyError, TypeError, ValueError) as exc:
        raise SerializationError(f"missing or invalid field: {exc}") from exc

    if kind == "ls":
        return LsIdentity(dimension)
    if kind == "linear":
        estimator: Estimator = LinearEstimator(LinearWeights(_complex_from_json(weights)))
    elif kind == "block-linear":
        blocks = [
            (np.asarray(b["positions"], dtype=np.int64),
             LinearWeights(_complex_from_json(b["matrix"])))
            for b in weights
        ]
        estimator = BlockLinearEstimator(blocks, dimension)
    elif kind == "mlp":
        params = MlpParams(*(np.asarray(weights[key], dtype=float) for key in ("w1", "b1", "w2", "b2")))
        hyper: Optional[MlpHyper] = None
        if doc.get("hyperparameters"):
            hyper = MlpHyper(**doc["hyperparameters"])
        estimator = MlpEstimator(
            params,
            hyper=hyper,
            seed=doc.get("seed"),
            initial_loss=doc.get("initial_loss", float("nan")),
            final_loss=doc.get("final_loss", float("nan")),
            epochs=doc.get("epochs", 0),
        )
    else:
        raise SerializationError(f"unknown estimator type {kind!r}")

    if estimator.dimension != dimension:
        raise SerializationError(
            f"document declares dimension {dimension}, weights give {estimator.dimension}"
        )
    return estimator


def to_json(estimator: Estimator, indent: Optional[int] = None) -> str:
    return json.dumps(to_document(estimator), indent=indent, sort_keys=True)


def from_json(text: str) -> Estimator:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"invalid JSON: {exc}") from exc
    return from_document(doc)
