"""Evaluation harness: metrics, calibration, cross-validation, importance, synth."""

from .crossval import (
    EvaluationReport,
    SweepCell,
    cross_validate,
    derive_seed,
    kfold_partition,
    sweep,
)
from .importance import binary_split_info_gain, info_gain, question_importance, type_importance
from .metrics import (
    ConfusionCounts,
    calibrate_threshold,
    confusion_at,
    pr_curve,
    roc_auc,
    roc_curve,
)
from .synth import estimate_prevalence, synth_generate, synth_session

__all__ = [
    "ConfusionCounts",
    "EvaluationReport",
    "SweepCell",
    "binary_split_info_gain",
    "calibrate_threshold",
    "confusion_at",
    "cross_validate",
    "derive_seed",
    "estimate_prevalence",
    "info_gain",
    "kfold_partition",
    "pr_curve",
    "question_importance",
    "roc_auc",
    "roc_curve",
    "sweep",
    "synth_generate",
    "synth_session",
    "type_importance",
]
