"""Model artifact serialization: canonical bytes, round trips, rejection."""

import json

import numpy as np
import pytest

from dyscreen.errors import ArtifactError
from dyscreen.evaluation.synth import synth_generate
from dyscreen.forest.artifact import (
    ARTIFACT_VERSION,
    deserialize_model,
    load_model,
    model_to_dict,
    save_model,
    serialize_model,
)
from dyscreen.forest.model import TrainConfig
from dyscreen.forest.training import train


@pytest.fixture(scope="module")
def model():
    data = synth_generate(n=50, prevalence=0.3, separation=0.5, seed=4)
    return train(data, TrainConfig(n_trees=4, seed=19)).with_threshold(0.24)


class TestRoundTrip:
    def test_bytes_survive_a_round_trip_unchanged(self, model):
        blob = serialize_model(model)
        again = serialize_model(deserialize_model(blob))
        assert again == blob

    def test_predictions_survive_a_round_trip(self, model):
        blob = serialize_model(model)
        restored = deserialize_model(blob)
        X, _ = synth_generate(n=20, prevalence=0.5, separation=0.5, seed=9).to_arrays()
        assert np.array_equal(restored.predict_scores(X), model.predict_scores(X))
        assert restored.threshold == model.threshold
        assert restored.variant.name == model.variant.name
        assert restored.class_weights == model.class_weights
        assert restored.config == model.config

    def test_file_round_trip(self, model, tmp_path):
        path = tmp_path / "model.json"
        save_model(model, path)
        assert serialize_model(load_model(path)) == serialize_model(model)

    def test_serialization_is_canonical(self, model):
        blob = serialize_model(model)
        assert b"\n" not in blob
        assert b": " not in blob
        doc = json.loads(blob)
        assert list(doc) == sorted(doc)

    def test_stump_round_trip(self):
        data = synth_generate(n=20, prevalence=0.5, separation=0.8, seed=6)
        stump = train(data, TrainConfig(n_trees=1, seed=2, max_depth=1))
        restored = deserialize_model(serialize_model(stump))
        assert restored.trees[0].to_node() == stump.trees[0].to_node()


def _doc(model) -> dict:
    return json.loads(serialize_model(model))


def _bytes_of(doc: dict) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


class TestRejection:
    def test_not_json(self):
        with pytest.raises(ArtifactError, match="not valid JSON"):
            deserialize_model(b"{truncated")
        with pytest.raises(ArtifactError):
            deserialize_model(b"\xff\xfe")

    def test_non_object_root(self):
        with pytest.raises(ArtifactError, match="object"):
            deserialize_model(b"[1,2]")

    def test_version_gate(self, model):
        doc = _doc(model)
        doc["version"] = ARTIFACT_VERSION + 1
        with pytest.raises(ArtifactError, match="version"):
            deserialize_model(_bytes_of(doc))
        del doc["version"]
        with pytest.raises(ArtifactError, match="version"):
            deserialize_model(_bytes_of(doc))

    def test_unknown_variant(self, model):
        doc = _doc(model)
        doc["variant"] = "Adult"
        with pytest.raises(ArtifactError):
            deserialize_model(_bytes_of(doc))

    def test_missing_trees(self, model):
        doc = _doc(model)
        del doc["trees"]
        with pytest.raises(ArtifactError, match="malformed"):
            deserialize_model(_bytes_of(doc))

    def test_leaf_out_of_range(self, model):
        doc = _doc(model)
        doc["trees"] = [{"leaf": 1.5}]
        with pytest.raises(ArtifactError):
            deserialize_model(_bytes_of(doc))

    def test_split_missing_child(self, model):
        doc = _doc(model)
        doc["trees"] = [
            {"feature_index": 0, "threshold": 0.5, "left": {"leaf": 0.0}}
        ]
        with pytest.raises(ArtifactError):
            deserialize_model(_bytes_of(doc))

    def test_feature_index_beyond_variant(self, model):
        doc = _doc(model)
        doc["trees"] = [
            {
                "feature_index": 196,
                "threshold": 0.5,
                "left": {"leaf": 0.0},
                "right": {"leaf": 1.0},
            }
        ]
        with pytest.raises(ArtifactError):
            deserialize_model(_bytes_of(doc))

    def test_threshold_out_of_range(self, model):
        doc = _doc(model)
        doc["threshold"] = 1.0
        with pytest.raises(ArtifactError):
            deserialize_model(_bytes_of(doc))


class TestDictForm:
    def test_carries_version_and_training_settings(self, model):
        doc = model_to_dict(model)
        assert doc["version"] == ARTIFACT_VERSION
        assert doc["variant"] == "Full"
        assert doc["threshold"] == 0.24
        assert doc["train_config"]["n_trees"] == 4
        assert doc["train_config"]["seed"] == 19
        assert doc["seed"] == 19
        assert len(doc["class_weights"]) == 2
        assert len(doc["trees"]) == 4
