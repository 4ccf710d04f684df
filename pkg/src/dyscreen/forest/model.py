"""Model types: training configuration, decision trees, the forest."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..core.variants import AgeVariant
from ..errors import DataError, TrainingError
from ._kernels import _predict_tree


def default_mtry(n_features: int) -> int:
    """floor(log2(F)) + 1 features tried per split; 8 at F=196."""
    return int(math.floor(math.log2(n_features))) + 1


@dataclass(frozen=True)
class TrainConfig:
    """Forest training knobs. None means resolve from the data at train time."""

    n_trees: int = 200
    max_depth: int | None = None
    mtry: int | None = None
    seed: int = 0
    min_node_weight: float | None = None

    def __post_init__(self):
        if self.n_trees < 1:
            raise TrainingError(f"n_trees must be >= 1, got {self.n_trees}")
        if self.max_depth is not None and self.max_depth < 1:
            raise TrainingError(f"max_depth must be >= 1 or None, got {self.max_depth}")
        if self.mtry is not None and self.mtry < 1:
            raise TrainingError(f"mtry must be >= 1 or None, got {self.mtry}")
        if self.min_node_weight is not None and not self.min_node_weight > 0:
            raise TrainingError("min_node_weight must be positive")

    def resolved_mtry(self, n_features: int) -> int:
        mtry = self.mtry if self.mtry is not None else default_mtry(n_features)
        if not 1 <= mtry <= n_features:
            raise TrainingError(f"mtry {mtry} outside 1..{n_features}")
        return mtry


class DecisionTree:
    """Binary tree over numeric features; left takes values <= threshold.

    Stored as preorder parallel arrays; ``feature[i] == -1`` marks a leaf and
    ``leaf[i]`` holds the positive-class weight fraction there.
    """

    __slots__ = ("feature", "threshold", "left", "right", "leaf")

    def __init__(
        self,
        feature: np.ndarray,
        threshold: np.ndarray,
        left: np.ndarray,
        right: np.ndarray,
        leaf: np.ndarray,
    ):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.leaf = leaf

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def depth(self) -> int:
        """Edge count of the longest root-to-leaf path."""
        best = 0
        stack = [(0, 0)]
        while stack:
            node, d = stack.pop()
            if self.feature[node] < 0:
                best = max(best, d)
            else:
                stack.append((int(self.left[node]), d + 1))
                stack.append((int(self.right[node]), d + 1))
        return best

    def predict_into(self, X: np.ndarray, out: np.ndarray) -> None:
        _predict_tree(self.feature, self.threshold, self.left, self.right, self.leaf, X, out)

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros(X.shape[0], dtype=np.float64)
        self.predict_into(X, out)
        return out

    def to_node(self) -> dict[str, Any]:
        """Recursive {feature_index, threshold, left, right} / {leaf} form."""

        def build(idx: int) -> dict[str, Any]:
            if self.feature[idx] < 0:
                return {"leaf": float(self.leaf[idx])}
            return {
                "feature_index": int(self.feature[idx]),
                "threshold": float(self.threshold[idx]),
                "left": build(int(self.left[idx])),
                "right": build(int(self.right[idx])),
            }

        return build(0)

    @classmethod
    def from_node(cls, node: dict[str, Any]) -> "DecisionTree":
        """Inverse of to_node; rebuilds the same preorder layout."""
        feats: list[int] = []
        ths: list[float] = []
        lefts: list[int] = []
        rights: list[int] = []
        leaves: list[float] = []

        def add(nd: dict[str, Any]) -> int:
            idx = len(feats)
            feats.append(-1)
            ths.append(0.0)
            lefts.append(-1)
            rights.append(-1)
            leaves.append(-1.0)
            if "leaf" in nd:
                frac = float(nd["leaf"])
                if not 0.0 <= frac <= 1.0:
                    raise ValueError(f"leaf fraction {frac} outside [0, 1]")
                leaves[idx] = frac
            else:
                f = int(nd["feature_index"])
                t = float(nd["threshold"])
                if f < 0:
                    raise ValueError(f"negative feature index {f}")
                if not math.isfinite(t):
                    raise ValueError(f"non-finite threshold {t}")
                feats[idx] = f
                ths[idx] = t
                lefts[idx] = add(nd["left"])
                rights[idx] = add(nd["right"])
            return idx

        add(node)
        return cls(
            np.array(feats, dtype=np.int64),
            np.array(ths, dtype=np.float64),
            np.array(lefts, dtype=np.int64),
            np.array(rights, dtype=np.int64),
            np.array(leaves, dtype=np.float64),
        )

    def max_feature_index(self) -> int:
        return int(self.feature.max(initial=-1))


@dataclass(frozen=True)
class ForestModel:
    """Trained forest plus the decision threshold it classifies with."""

    trees: tuple[DecisionTree, ...]
    threshold: float
    variant: AgeVariant
    config: TrainConfig
    class_weights: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(self.trees))
        if not self.trees:
            raise TrainingError("forest has no trees")
        if not 0.0 < self.threshold < 1.0:
            raise TrainingError(f"threshold {self.threshold} outside (0, 1)")
        worst = max(t.max_feature_index() for t in self.trees)
        if worst >= self.variant.feature_count:
            raise TrainingError(
                f"tree references feature {worst}, variant "
                f"{self.variant.name} has {self.variant.feature_count}"
            )

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        """Mean leaf fraction over trees, one score per row."""
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.variant.feature_count:
            raise DataError(
                f"expected shape (n, {self.variant.feature_count}), got {X.shape}"
            )
        out = np.zeros(X.shape[0], dtype=np.float64)
        for tree in self.trees:
            tree.predict_into(X, out)
        out /= len(self.trees)
        return out

    def predict_score(self, vector: np.ndarray) -> float:
        return float(self.predict_scores(np.asarray(vector, dtype=np.float64)[None, :])[0])

    def classify_scores(self, scores: np.ndarray) -> np.ndarray:
        """1 where score >= threshold (ties flag as the positive class)."""
        return (np.asarray(scores) >= self.threshold).astype(np.int64)

    def with_threshold(self, threshold: float) -> "ForestModel":
        return dataclasses.replace(self, threshold=threshold)
