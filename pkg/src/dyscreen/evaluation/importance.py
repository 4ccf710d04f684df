"""Feature importance by binary-split information gain, with group aggregation."""

from __future__ import annotations

import numpy as np

from ..core.types import Dataset
from ..core.variants import MEASURE_NAMES, N_DEMOGRAPHIC

_DEMOGRAPHY = "Demography"


def _entropy(counts: np.ndarray) -> float:
    """Shannon entropy in bits of a count vector."""
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def binary_split_info_gain(values: np.ndarray, labels: np.ndarray) -> float:
    """H(label) minus the best conditional entropy over binary numeric splits.

    Splits sit at midpoints of adjacent distinct values; a constant feature
    admits no split and gains nothing. Raw counts, log base 2.
    """
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n = values.shape[0]
    base = _entropy(np.bincount(labels, minlength=2))
    order = np.argsort(values, kind="stable")
    v = values[order]
    lab = labels[order]
    pos_prefix = np.cumsum(lab == 1)
    best_cond = base
    for i in range(n - 1):
        if v[i + 1] == v[i]:
            continue
        nl = i + 1
        nr = n - nl
        pl = int(pos_prefix[i])
        pr = int(pos_prefix[-1]) - pl
        h_l = _entropy(np.array([nl - pl, pl]))
        h_r = _entropy(np.array([nr - pr, pr]))
        cond = (nl / n) * h_l + (nr / n) * h_r
        if cond < best_cond:
            best_cond = cond
    return base - best_cond


def info_gain(dataset: Dataset, feature_index: int) -> float:
    """Information gain of one feature column against the labels, in bits."""
    X, y = dataset.to_arrays()
    return binary_split_info_gain(X[:, feature_index], y)


def _all_gains(dataset: Dataset) -> np.ndarray:
    X, y = dataset.to_arrays()
    return np.array([binary_split_info_gain(X[:, j], y) for j in range(X.shape[1])])


def _normalize(pairs: list[tuple[str, float]]) -> list[tuple[str, float]]:
    top = max(v for _, v in pairs)
    if top == 0:
        return [(name, 0.0) for name, v in pairs]
    # v / top first so the maximum lands exactly on 100.0
    return [(name, 100.0 * (v / top)) for name, v in pairs]


def question_importance(dataset: Dataset) -> list[tuple[str, float]]:
    """Mean gain per question block (demographics as one group), max scaled to 100.

    Sorted by importance descending; equal values keep question order.
    """
    gains = _all_gains(dataset)
    variant = dataset.variant
    pairs = [(_DEMOGRAPHY, float(gains[:N_DEMOGRAPHIC].mean()))]
    for qid in variant.qids:
        start, end = variant.block(qid)
        pairs.append((f"Q{qid}", float(gains[start:end].mean())))
    pairs = _normalize(pairs)
    return sorted(pairs, key=lambda kv: -kv[1])


def type_importance(dataset: Dataset) -> list[tuple[str, float]]:
    """Mean gain per measure type across questions (plus demographics), max 100."""
    gains = _all_gains(dataset)
    variant = dataset.variant
    pairs = [(_DEMOGRAPHY, float(gains[:N_DEMOGRAPHIC].mean()))]
    for offset, name in enumerate(MEASURE_NAMES):
        idx = [variant.block(qid)[0] + offset for qid in variant.qids]
        pairs.append((name.capitalize(), float(gains[idx].mean())))
    pairs = _normalize(pairs)
    return sorted(pairs, key=lambda kv: -kv[1])
