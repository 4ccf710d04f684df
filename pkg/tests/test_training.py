"""Forest training: weighting, bagging determinism, and prediction."""

import numpy as np
import pytest

from dyscreen.errors import TrainingError
from dyscreen.evaluation.synth import synth_generate
from dyscreen.forest.artifact import serialize_model
from dyscreen.forest.model import ForestModel, TrainConfig
from dyscreen.forest.training import (
    class_weights,
    classify,
    gini,
    instance_weights,
    predict_score,
    train,
    tree_seed,
)
from dyscreen.core.types import Label


class TestClassWeights:
    def test_each_class_carries_half_the_total_mass(self):
        y = np.array([1, 1, 0, 0, 0, 0, 0, 0, 0, 0])
        w_pos, w_neg = class_weights(y)
        assert w_pos == 10 / (2 * 2)
        assert w_neg == 10 / (2 * 8)
        w = instance_weights(y, w_pos, w_neg)
        assert w[y == 1].sum() == pytest.approx(5.0)
        assert w[y == 0].sum() == pytest.approx(5.0)

    def test_balanced_data_gets_unit_weights(self):
        y = np.array([0, 1, 0, 1])
        assert class_weights(y) == (1.0, 1.0)

    def test_single_class_is_rejected(self):
        with pytest.raises(TrainingError, match="both classes"):
            class_weights(np.zeros(5, dtype=np.int64))
        with pytest.raises(TrainingError):
            class_weights(np.ones(5, dtype=np.int64))

    def test_accepts_a_dataset(self):
        data = synth_generate(n=40, prevalence=0.25, separation=0.5, seed=3)
        w_pos, w_neg = class_weights(data)
        assert w_pos == 40 / (2 * 10)
        assert w_neg == 40 / (2 * 30)


class TestGini:
    def test_known_values(self):
        assert gini(1.0, 1.0) == pytest.approx(0.5)
        assert gini(1.0, 0.0) == 0.0
        assert gini(3.0, 1.0) == pytest.approx(1 - 0.75**2 - 0.25**2)

    def test_empty_and_negative_rejected(self):
        with pytest.raises(ValueError):
            gini(0.0, 0.0)
        with pytest.raises(ValueError):
            gini(-1.0, 2.0)


class TestTrainConfig:
    def test_default_mtry_is_log2_plus_one(self):
        config = TrainConfig()
        assert config.resolved_mtry(196) == 8
        assert config.resolved_mtry(118) == 7
        assert config.resolved_mtry(2) == 2

    def test_explicit_mtry_must_fit_the_feature_count(self):
        assert TrainConfig(mtry=14).resolved_mtry(196) == 14
        assert TrainConfig(mtry=196).resolved_mtry(196) == 196
        with pytest.raises(TrainingError, match="mtry"):
            TrainConfig(mtry=500).resolved_mtry(196)

    def test_invalid_fields_rejected(self):
        with pytest.raises(TrainingError):
            TrainConfig(n_trees=0)
        with pytest.raises(TrainingError):
            TrainConfig(max_depth=0)
        with pytest.raises(TrainingError):
            TrainConfig(mtry=0)
        with pytest.raises(TrainingError):
            TrainConfig(min_node_weight=0.0)


class TestTrain:
    @pytest.fixture(scope="class")
    @classmethod
    def data(cls):
        return synth_generate(n=80, prevalence=0.25, separation=0.6, seed=11)

    def test_model_shape_and_metadata(self, data):
        config = TrainConfig(n_trees=5, seed=42)
        model = train(data, config)
        assert len(model.trees) == 5
        assert model.threshold == 0.5
        assert model.variant.name == "Full"
        assert model.config is config
        w_pos, w_neg = model.class_weights
        assert w_pos == 80 / (2 * 20)
        assert w_neg == 80 / (2 * 60)

    def test_same_seed_reproduces_the_model_bytes(self, data):
        config = TrainConfig(n_trees=6, seed=9)
        a = train(data, TrainConfig(n_trees=6, seed=9))
        b = train(data, config)
        assert serialize_model(a) == serialize_model(b)

    def test_parallel_equals_serial_bytes(self, data):
        serial = train(data, TrainConfig(n_trees=8, seed=5), n_jobs=1)
        parallel = train(data, TrainConfig(n_trees=8, seed=5), n_jobs=4)
        assert serialize_model(serial) == serialize_model(parallel)

    def test_different_seeds_differ(self, data):
        a = train(data, TrainConfig(n_trees=4, seed=1))
        b = train(data, TrainConfig(n_trees=4, seed=2))
        assert serialize_model(a) != serialize_model(b)

    def test_trees_vary_within_a_forest(self, data):
        model = train(data, TrainConfig(n_trees=4, seed=3))
        nodes = [tree.to_node() for tree in model.trees]
        assert any(node != nodes[0] for node in nodes[1:])

    def test_scores_are_leaf_fraction_means(self, data):
        model = train(data, TrainConfig(n_trees=7, seed=13))
        X, _ = data.to_arrays()
        for row in X[:10]:
            per_tree = [float(tree.predict(row[None, :])[0]) for tree in model.trees]
            assert predict_score(model, row) == pytest.approx(
                sum(per_tree) / len(per_tree), abs=1e-12
            )
            assert 0.0 <= predict_score(model, row) <= 1.0

    def test_classify_uses_threshold_inclusively(self):
        # Noise labels leave out-of-bag trees disagreeing, so some score
        # lands strictly inside (0, 1) and the tie rule is observable.
        noisy = synth_generate(n=60, prevalence=0.4, separation=0.0, seed=77)
        model = train(noisy, TrainConfig(n_trees=5, seed=8))
        X, _ = noisy.to_arrays()
        scores = model.predict_scores(X)
        interior = np.flatnonzero((scores > 0.0) & (scores < 1.0))
        assert interior.size > 0
        row = X[interior[0]]
        score = float(scores[interior[0]])
        assert classify(model.with_threshold(score), row) is Label.DYSLEXIA
        above = float(np.nextafter(score, 1.0))
        assert classify(model.with_threshold(above), row) is Label.NO_DYSLEXIA

    def test_separable_data_is_learned(self, data):
        model = train(data, TrainConfig(n_trees=30, seed=21))
        X, y = data.to_arrays()
        scores = model.predict_scores(X)
        assert scores[y == 1].mean() > scores[y == 0].mean() + 0.2


class TestTreeSeed:
    def test_xor_of_seed_and_index(self):
        assert tree_seed(0, 0) == 0
        assert tree_seed(196, 0) == 196
        assert tree_seed(196, 3) == 196 ^ 3
        assert tree_seed(2**70 + 5, 1) == ((2**70 + 5) & ((1 << 64) - 1)) ^ 1

    def test_distinct_within_forest(self):
        seeds = {tree_seed(196, i) for i in range(200)}
        assert len(seeds) == 200

    def test_bootstrap_draw_matches_documented_recipe(self):
        data = synth_generate(n=30, prevalence=0.3, separation=0.9, seed=2)
        X, y = data.to_arrays()
        config = TrainConfig(n_trees=1, seed=77, max_depth=1)
        model = train(data, config)

        from dyscreen.forest.training import build_tree, tree_seed as derive

        ts = derive(77, 0)
        boot = np.random.default_rng(ts).integers(0, 30, size=30, dtype=np.int64)
        w_pos, w_neg = class_weights(y)
        w = instance_weights(y, w_pos, w_neg)
        by_hand = build_tree(X, y, w, config, ts, samples=boot)
        assert by_hand.to_node() == model.trees[0].to_node()


class TestModelInvariants:
    def test_threshold_bounds(self):
        data = synth_generate(n=20, prevalence=0.5, separation=0.5, seed=1)
        model = train(data, TrainConfig(n_trees=1, seed=1))
        with pytest.raises(Exception):
            model.with_threshold(0.0)
        with pytest.raises(Exception):
            model.with_threshold(1.0)
        assert model.with_threshold(0.25).threshold == 0.25

    def test_predict_scores_rejects_wrong_width(self):
        data = synth_generate(n=20, prevalence=0.5, separation=0.5, seed=1)
        model = train(data, TrainConfig(n_trees=1, seed=1))
        with pytest.raises(Exception):
            model.predict_scores(np.zeros((3, 7)))
