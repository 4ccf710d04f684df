"""k-fold cross-validation with pooled-score threshold calibration, and sweeps."""

from __future__ import annotations

import dataclasses
import io
import json
from dataclasses import dataclass

import numpy as np

from ..core.types import Dataset
from ..errors import DataError, TrainingError
from ..forest.model import TrainConfig
from ..forest.training import class_weights, instance_weights, train
from .metrics import calibrate_threshold, confusion_at, pr_curve, roc_auc, roc_curve

_MASK64 = (1 << 64) - 1
_MAX_PARTITION_RETRIES = 20


def derive_seed(base: int, index: int) -> int:
    """Deterministic child seed for (base, index); splitmix64 finalizer."""
    x = ((base & _MASK64) + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


def kfold_partition(n: int, k: int, seed: int) -> list[np.ndarray]:
    """Shuffle 0..n-1 into k folds; the first n mod k folds take the extra item."""
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    if k > n:
        raise DataError(f"k = {k} exceeds n = {n}")
    perm = np.random.default_rng(seed & _MASK64).permutation(n)
    small = n // k
    extra = n % k
    folds = []
    at = 0
    for i in range(k):
        size = small + (1 if i < extra else 0)
        folds.append(np.sort(perm[at : at + size]))
        at += size
    return folds


@dataclass(frozen=True)
class EvaluationReport:
    """Cross-validated metrics; weighted (class-balanced) and raw side by side."""

    variant: str
    n_records: int
    n_positive: int
    fold_count: int
    fold_sizes: tuple[int, ...]
    chosen_threshold: float
    balanced_accuracy: float
    precision_dys: float
    recall_dys: float
    precision_nodys: float
    recall_nodys: float
    roc_auc: float
    raw_accuracy: float
    raw_precision_dys: float
    raw_recall_dys: float
    raw_precision_nodys: float
    raw_recall_nodys: float
    pr_points: tuple[tuple[float, float, float], ...]
    roc_points: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        rates = (
            self.balanced_accuracy,
            self.precision_dys,
            self.recall_dys,
            self.precision_nodys,
            self.recall_nodys,
            self.roc_auc,
            self.raw_accuracy,
        )
        for r in rates:
            if not 0.0 <= r <= 1.0:
                raise DataError(f"metric {r} outside [0, 1]")
        ts = [t for t, _, _ in self.pr_points]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DataError("pr curve thresholds must be strictly increasing")

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["fold_sizes"] = list(self.fold_sizes)
        out["pr_points"] = [list(p) for p in self.pr_points]
        out["roc_points"] = [list(p) for p in self.roc_points]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def text_table(self) -> str:
        rows = [
            ("records", f"{self.n_records} ({self.n_positive} positive)"),
            ("folds", f"{self.fold_count} (sizes {self._fold_size_summary()})"),
            ("threshold", f"{self.chosen_threshold:.3f}"),
            ("balanced accuracy", f"{100 * self.balanced_accuracy:.1f}%"),
            ("precision (dys)", f"{100 * self.precision_dys:.1f}%"),
            ("recall (dys)", f"{100 * self.recall_dys:.1f}%"),
            ("precision (nodys)", f"{100 * self.precision_nodys:.1f}%"),
            ("recall (nodys)", f"{100 * self.recall_nodys:.1f}%"),
            ("ROC AUC", f"{self.roc_auc:.3f}"),
            ("raw accuracy", f"{100 * self.raw_accuracy:.1f}%"),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)

    def _fold_size_summary(self) -> str:
        sizes = sorted(set(self.fold_sizes))
        return ", ".join(
            f"{self.fold_sizes.count(s)} of {s}" for s in sizes
        )

    def pr_csv(self) -> str:
        return _points_csv("threshold,precision_dys,recall_dys", self.pr_points)

    def roc_csv(self) -> str:
        return _points_csv("threshold,fpr,tpr", self.roc_points)


def _points_csv(header: str, points) -> str:
    buf = io.StringIO()
    buf.write(header + "\n")
    for t, a, b in points:
        buf.write(f"{t!r},{a!r},{b!r}\n")
    return buf.getvalue()


def cross_validate(
    dataset: Dataset,
    config: TrainConfig,
    k: int,
    seed: int,
    n_jobs: int = 1,
    grid_step: float = 0.005,
) -> EvaluationReport:
    """Train on k-1 folds, score the held-out fold, pool scores, calibrate once.

    Each fold trains with a seed derived from (config.seed, fold index); the
    partition is redrawn (bounded retries) if a training split loses a class.
    """
    if k < 2:
        raise DataError(f"cross-validation needs k >= 2, got {k}")
    X, y = dataset.to_arrays()
    n = X.shape[0]
    w_pos, w_neg = class_weights(y)
    weights = instance_weights(y, w_pos, w_neg)

    # The partition seed always goes through derive_seed so the shuffle is
    # decoupled from other streams a caller may have fed the same integer
    # (a raw seed here can replay a generator's row permutation and stack
    # one class into a single fold).
    folds = None
    for attempt in range(_MAX_PARTITION_RETRIES):
        candidate = kfold_partition(n, k, derive_seed(seed, attempt))
        ok = True
        for fold in candidate:
            mask = np.ones(n, dtype=bool)
            mask[fold] = False
            if y[mask].min(initial=1) == 1 or y[mask].max(initial=0) == 0:
                ok = False
                break
        if ok:
            folds = candidate
            break
    if folds is None:
        raise TrainingError(
            f"no partition with both classes in every training split after "
            f"{_MAX_PARTITION_RETRIES} attempts"
        )

    scores = np.empty(n, dtype=np.float64)
    for i, fold in enumerate(folds):
        mask = np.ones(n, dtype=bool)
        mask[fold] = False
        train_records = [dataset.records[j] for j in np.flatnonzero(mask)]
        sub = Dataset(train_records, dataset.variant, require_labels=True)
        fold_config = dataclasses.replace(config, seed=derive_seed(config.seed, i))
        model = train(sub, fold_config, n_jobs=n_jobs)
        scores[fold] = model.predict_scores(X[fold])

    threshold = calibrate_threshold(scores, y, weights, grid_step=grid_step)
    c = confusion_at(scores, y, weights, threshold)
    raw = confusion_at(scores, y, np.ones(n), threshold)
    return EvaluationReport(
        variant=dataset.variant.name,
        n_records=n,
        n_positive=int((y == 1).sum()),
        fold_count=k,
        fold_sizes=tuple(len(f) for f in folds),
        chosen_threshold=threshold,
        balanced_accuracy=c.accuracy,
        precision_dys=c.precision_pos,
        recall_dys=c.recall_pos,
        precision_nodys=c.precision_neg,
        recall_nodys=c.recall_neg,
        roc_auc=roc_auc(scores, y, weights),
        raw_accuracy=raw.raw_accuracy,
        raw_precision_dys=raw.precision_pos,
        raw_recall_dys=raw.recall_pos,
        raw_precision_nodys=raw.precision_neg,
        raw_recall_nodys=raw.recall_neg,
        pr_points=tuple(pr_curve(scores, y, weights)),
        roc_points=tuple(roc_curve(scores, y, weights)),
    )


@dataclass(frozen=True)
class SweepCell:
    max_depth: int
    mtry: int
    roc_auc: float
    balanced_accuracy: float


def sweep(
    dataset: Dataset,
    depths: list[int],
    mtrys: list[int],
    k: int,
    seed: int,
    n_trees: int = 200,
    n_jobs: int = 1,
) -> list[SweepCell]:
    """cross_validate every (depth, mtry) cell; same partition seed throughout."""
    if not depths or not mtrys:
        raise DataError("sweep grids must be non-empty")
    cells = []
    index = 0
    for depth in depths:
        for mtry in mtrys:
            config = TrainConfig(
                n_trees=n_trees, max_depth=depth, mtry=mtry, seed=derive_seed(seed, index)
            )
            report = cross_validate(dataset, config, k, seed, n_jobs=n_jobs)
            cells.append(
                SweepCell(
                    max_depth=depth,
                    mtry=mtry,
                    roc_auc=report.roc_auc,
                    balanced_accuracy=report.balanced_accuracy,
                )
            )
            index += 1
    return cells
