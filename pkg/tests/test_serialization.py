"""tests/test_serialization.py — Unit tests for estimator JSON documents."""

from __future__ import annotations

import json

import numpy as np
import pytest

from estimators.base import LsIdentity
from estimators.linear import BlockLinearEstimator, LinearEstimator, LinearWeights
from estimators.mlp import MlpEstimator, MlpHyper, init_mlp
from estimators.serialization import SerializationError, from_document, from_json, to_document, to_json


@pytest.fixture
def linear():
    rng = np.random.default_rng(21)
    return LinearEstimator(LinearWeights(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))))


@pytest.fixture
def mlp():
    hyper = MlpHyper(batch_size=32, learning_rate=5e-3)
    params = init_mlp(2, hyper, np.random.default_rng(22))
    return MlpEstimator(params, hyper=hyper, seed=7, initial_loss=1.5, final_loss=0.25, epochs=12)


class TestLinearDocuments:
    def test_document_fields(self, linear):
        doc = to_document(linear)
        assert doc["type"] == "linear"
        assert doc["dimension"] == 3
        assert len(doc["weights"][0][0]) == 2

    def test_reload_is_bit_identical(self, linear):
        restored = from_json(to_json(linear))
        assert np.array_equal(restored.weights.matrix, linear.weights.matrix)

    def test_block_linear(self):
        blocks = [
            (np.array([0, 1]), LinearWeights(np.array([[1, 2j], [3, 4]]))),
            (np.array([2, 3]), LinearWeights(np.eye(2) * (0.5 - 0.25j))),
        ]
        est = BlockLinearEstimator(blocks, 4)
        restored = from_json(to_json(est))
        assert isinstance(restored, BlockLinearEstimator)
        assert np.array_equal(restored.as_matrix(), est.as_matrix())

    def test_ls(self):
        restored = from_json(to_json(LsIdentity(5)))
        assert isinstance(restored, LsIdentity)
        assert restored.dimension == 5


class TestMlpDocuments:
    def test_reload_is_bit_identical(self, mlp):
        restored = from_json(to_json(mlp))
        for a, b in zip(restored.params.arrays(), mlp.params.arrays()):
            assert np.array_equal(a, b)

    def test_metadata_preserved(self, mlp):
        restored = from_json(to_json(mlp))
        assert restored.hyper == mlp.hyper
        assert restored.seed == 7
        assert restored.final_loss == 0.25
        assert restored.epochs == 12

    def test_predictions_identical(self, mlp):
        h = np.array([[1 + 1j, -0.5 + 2j]])
        assert np.array_equal(from_json(to_json(mlp)).apply(h), mlp.apply(h))

    def test_sorted_keys(self, mlp):
        text = to_json(mlp)
        assert list(json.loads(text)) == sorted(json.loads(text))


class TestMalformedDocuments:
    def test_unknown_type(self):
        with pytest.raises(SerializationError):
            from_document({"type": "cnn", "dimension": 2, "weights": []})

    def test_missing_field(self):
        with pytest.raises(SerializationError):
            from_document({"dimension": 2})

    def test_dimension_mismatch(self, linear):
        doc = to_document(linear)
        doc["dimension"] = 4
        with pytest.raises(SerializationError):
            from_document(doc)

    def test_invalid_json(self):
        with pytest.raises(SerializationError):
            from_json("{not json")
