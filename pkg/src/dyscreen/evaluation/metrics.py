"""Threshold metrics: confusion masses, calibration, ROC/PR curves.

All operations take a per-instance weight vector; pass unit weights for raw
counts. Predictions are positive where score >= threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError


def _unit(x: float) -> float:
    """Clamp float-rounding spill back into [0, 1]."""
    return 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)


@dataclass(frozen=True)
class ConfusionCounts:
    """Weighted confusion masses with raw (unweighted) counts alongside."""

    tp: float
    fp: float
    tn: float
    fn: float
    tp_raw: int
    fp_raw: int
    tn_raw: int
    fn_raw: int

    @property
    def positive_mass(self) -> float:
        return self.tp + self.fn

    @property
    def negative_mass(self) -> float:
        return self.tn + self.fp

    @property
    def accuracy(self) -> float:
        total = self.positive_mass + self.negative_mass
        return _unit(((self.tp + self.tn) / total if total else 0.0))

    @property
    def raw_accuracy(self) -> float:
        total = self.tp_raw + self.fp_raw + self.tn_raw + self.fn_raw
        return _unit(((self.tp_raw + self.tn_raw) / total if total else 0.0))

    @property
    def recall_pos(self) -> float:
        return _unit((self.tp / self.positive_mass if self.positive_mass else 0.0))

    @property
    def recall_neg(self) -> float:
        return _unit((self.tn / self.negative_mass if self.negative_mass else 0.0))

    @property
    def precision_pos(self) -> float:
        denom = self.tp + self.fp
        return _unit((self.tp / denom if denom else 0.0))

    @property
    def precision_neg(self) -> float:
        denom = self.tn + self.fn
        return _unit((self.tn / denom if denom else 0.0))

    @property
    def fnr(self) -> float:
        return _unit((self.fn / self.positive_mass if self.positive_mass else 0.0))

    @property
    def fpr(self) -> float:
        return _unit((self.fp / self.negative_mass if self.negative_mass else 0.0))


def _check_inputs(scores, labels, weights) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.float64)
    if not (scores.shape == labels.shape == weights.shape) or scores.ndim != 1:
        raise DataError("scores, labels, weights must be equal-length 1-d arrays")
    return scores, labels, weights


def confusion_at(scores, labels, weights, threshold: float) -> ConfusionCounts:
    """Confusion masses when flagging every score >= threshold."""
    scores, labels, weights = _check_inputs(scores, labels, weights)
    pred = scores >= threshold
    pos = labels == 1
    return ConfusionCounts(
        tp=float(weights[pred & pos].sum()),
        fp=float(weights[pred & ~pos].sum()),
        tn=float(weights[~pred & ~pos].sum()),
        fn=float(weights[~pred & pos].sum()),
        tp_raw=int(np.sum(pred & pos)),
        fp_raw=int(np.sum(pred & ~pos)),
        tn_raw=int(np.sum(~pred & ~pos)),
        fn_raw=int(np.sum(~pred & pos)),
    )


def calibrate_threshold(scores, labels, weights, grid_step: float = 0.005) -> float:
    """Operating point where missed-positive and false-alarm rates meet.

    Scans the grid {grid_step * i} inside (0, 1) plus the midpoints of
    adjacent distinct scores and returns the candidate minimizing
    |FNR - FPR|; ties go to the smaller threshold.
    """
    scores, labels, weights = _check_inputs(scores, labels, weights)
    if not ((labels == 1).any() and (labels == 0).any()):
        raise DataError("calibration needs both classes")
    if not 0.0 < grid_step < 1.0:
        raise DataError(f"grid_step {grid_step} outside (0, 1)")
    candidates = []
    i = 1
    while grid_step * i < 1.0:
        candidates.append(grid_step * i)
        i += 1
    distinct = np.unique(scores)
    candidates.extend(((distinct[:-1] + distinct[1:]) / 2.0).tolist())
    candidates.sort()

    pos_mass = float(weights[labels == 1].sum())
    neg_mass = float(weights[labels == 0].sum())
    best_t = candidates[0]
    best_gap = np.inf
    for t in candidates:
        pred = scores >= t
        fn = float(weights[(~pred) & (labels == 1)].sum())
        fp = float(weights[pred & (labels == 0)].sum())
        gap = abs(fn / pos_mass - fp / neg_mass)
        if gap < best_gap:
            best_gap = gap
            best_t = t
    return float(best_t)


def roc_auc(scores, labels, weights) -> float:
    """Weighted P(score_pos > score_neg) + 0.5 P(equal)."""
    scores, labels, weights = _check_inputs(scores, labels, weights)
    pos_mass = float(weights[labels == 1].sum())
    neg_mass = float(weights[labels == 0].sum())
    if pos_mass == 0 or neg_mass == 0:
        raise DataError("roc_auc needs both classes")
    order = np.argsort(scores, kind="stable")
    s = scores[order]
    lab = labels[order]
    wt = weights[order]
    auc_num = 0.0
    neg_below = 0.0
    i = 0
    n = s.shape[0]
    while i < n:
        j = i
        pos_here = 0.0
        neg_here = 0.0
        while j < n and s[j] == s[i]:
            if lab[j] == 1:
                pos_here += wt[j]
            else:
                neg_here += wt[j]
            j += 1
        auc_num += pos_here * (neg_below + 0.5 * neg_here)
        neg_below += neg_here
        i = j
    return _unit(auc_num / (pos_mass * neg_mass))


def pr_curve(scores, labels, weights) -> list[tuple[float, float, float]]:
    """(threshold, precision_pos, recall_pos) at every distinct score, ascending."""
    scores, labels, weights = _check_inputs(scores, labels, weights)
    if not ((labels == 1).any() and (labels == 0).any()):
        raise DataError("pr_curve needs both classes")
    points = []
    for t in np.unique(scores):
        c = confusion_at(scores, labels, weights, float(t))
        points.append((float(t), c.precision_pos, c.recall_pos))
    return points


def roc_curve(scores, labels, weights) -> list[tuple[float, float, float]]:
    """(threshold, fpr, tpr) at every distinct score, ascending."""
    scores, labels, weights = _check_inputs(scores, labels, weights)
    points = []
    for t in np.unique(scores):
        c = confusion_at(scores, labels, weights, float(t))
        points.append((float(t), c.fpr, c.recall_pos))
    return points
