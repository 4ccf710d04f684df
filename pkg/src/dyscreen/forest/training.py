"""Forest training: class weighting, split search, tree growth, bagging."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..core.types import Dataset, Label
from ..errors import TrainingError
from ._kernels import _best_split, _grow
from .model import DecisionTree, ForestModel, TrainConfig

_MASK64 = (1 << 64) - 1


def class_weights(data: Dataset | np.ndarray) -> tuple[float, float]:
    """(w_dys, w_nodys) with w_c = N / (2 N_c): each class carries mass N/2."""
    y = data.labels() if isinstance(data, Dataset) else np.asarray(data)
    n = int(y.shape[0])
    n_pos = int(np.sum(y == 1))
    n_neg = n - n_pos
    if n_pos == 0 or n_neg == 0:
        raise TrainingError("both classes must be present to weight them")
    return n / (2.0 * n_pos), n / (2.0 * n_neg)


def instance_weights(y: np.ndarray, w_pos: float, w_neg: float) -> np.ndarray:
    return np.where(y == 1, w_pos, w_neg).astype(np.float64)


def gini(w_pos: float, w_neg: float) -> float:
    """Binary gini impurity of a node with the given class masses."""
    if w_pos < 0 or w_neg < 0:
        raise ValueError("class masses must be non-negative")
    total = w_pos + w_neg
    if total == 0:
        raise ValueError("empty node has no impurity")
    return 1.0 - (w_pos / total) ** 2 - (w_neg / total) ** 2


def best_split(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    candidate_features,
    samples: np.ndarray | None = None,
) -> tuple[int, float, float] | None:
    """Best (feature, threshold, gain) over the candidates, or None.

    Thresholds are midpoints of adjacent distinct values; gain is the weighted
    gini decrease; only strictly positive gains qualify. Ties break toward
    the lowest feature index, then the lowest threshold.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    if samples is None:
        samples = np.arange(X.shape[0], dtype=np.int64)
    else:
        samples = np.ascontiguousarray(samples, dtype=np.int64)
    features = np.ascontiguousarray(candidate_features, dtype=np.int64)
    f, t, gain = _best_split(X, y, w, samples, features)
    if f < 0:
        return None
    return int(f), float(t), float(gain)


def build_tree(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    config: TrainConfig,
    tree_seed: int,
    samples: np.ndarray | None = None,
) -> DecisionTree:
    """Grow one tree on the given sample (defaults to every row, no bootstrap)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    if samples is None:
        samples = np.arange(X.shape[0], dtype=np.int64)
    else:
        samples = np.array(samples, dtype=np.int64)  # kernel partitions in place
    if samples.shape[0] == 0:
        raise TrainingError("cannot grow a tree on an empty sample")
    mtry = config.resolved_mtry(X.shape[1])
    max_depth = -1 if config.max_depth is None else config.max_depth
    min_node_weight = (
        config.min_node_weight if config.min_node_weight is not None else float(w.min())
    )
    feature, threshold, left, right, leaf = _grow(
        X, y, w, samples, mtry, max_depth, min_node_weight, np.uint64(tree_seed & _MASK64)
    )
    return DecisionTree(feature, threshold, left, right, leaf)


def tree_seed(seed: int, index: int) -> int:
    """Per-tree stream seed: seed XOR tree index (64-bit)."""
    return (seed & _MASK64) ^ index


def train(dataset: Dataset, config: TrainConfig, n_jobs: int = 1) -> ForestModel:
    """Bagged forest: tree i trains on n draws with replacement, seed seed^i.

    Class weights ride along as instance weights. The initial threshold is
    0.5; calibration replaces it. Parallel and serial runs build identical
    models because each tree owns its own seed-derived RNG streams.
    """
    X, y = dataset.to_arrays()
    w_pos, w_neg = class_weights(y)
    w = instance_weights(y, w_pos, w_neg)
    n = X.shape[0]
    config.resolved_mtry(X.shape[1])

    def one_tree(i: int) -> DecisionTree:
        ts = tree_seed(config.seed, i)
        boot = np.random.default_rng(ts).integers(0, n, size=n, dtype=np.int64)
        return build_tree(X, y, w, config, ts, samples=boot)

    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            trees = tuple(pool.map(one_tree, range(config.n_trees)))
    else:
        trees = tuple(one_tree(i) for i in range(config.n_trees))
    return ForestModel(
        trees=trees,
        threshold=0.5,
        variant=dataset.variant,
        config=config,
        class_weights=(w_pos, w_neg),
    )


def predict_score(model: ForestModel, vector: np.ndarray) -> float:
    """Mean over trees of the leaf positive fractions for one vector."""
    return model.predict_score(vector)


def classify(model: ForestModel, vector: np.ndarray) -> Label:
    """Dyslexia iff the score reaches the model threshold (tie flags)."""
    score = model.predict_score(vector)
    return Label.DYSLEXIA if score >= model.threshold else Label.NO_DYSLEXIA
