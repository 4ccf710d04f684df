"""Class-weighted random forest: training, scoring, thresholded classification."""

from .artifact import (
    ARTIFACT_VERSION,
    deserialize_model,
    load_model,
    model_to_dict,
    save_model,
    serialize_model,
)
from .model import DecisionTree, ForestModel, TrainConfig, default_mtry
from .training import best_split, build_tree, class_weights, classify, gini, predict_score, train

__all__ = [
    "ARTIFACT_VERSION",
    "DecisionTree",
    "ForestModel",
    "TrainConfig",
    "best_split",
    "build_tree",
    "class_weights",
    "classify",
    "default_mtry",
    "deserialize_model",
    "gini",
    "load_model",
    "model_to_dict",
    "predict_score",
    "save_model",
    "serialize_model",
    "train",
]
