"""Per-class evaluation and stratified k-fold cross-validation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import clone

from queryintent._validation import check_random_state, check_X_y


@dataclass
class Dataset:
    """Feature matrix with integer class ids and display names."""

    features: np.ndarray
    labels: np.ndarray
    class_names: list[str]

    def __post_init__(self):
        self.features, self.labels = check_X_y(self.features, self.labels)
        if self.labels.max() >= len(self.class_names):
            raise ValueError("label id outside class_names range")

    @property
    def n_classes(self) -> int:
        return len(self.class_names)


@dataclass
class EvaluationReport:
    """Accuracy, per-class P/R/F1 (percent) and the pooled confusion matrix."""

    accuracy: float
    per_class: dict[str, dict[str, float]]
    confusion: np.ndarray
    folds: int = 1
    class_names: list[str] = field(default_factory=list)

    @property
    def macro_f1(self) -> float:
        scores = [m["f1"] for m in self.per_class.values()]
        return float(np.mean(scores)) if scores else 0.0

    def as_dict(self) -> dict:
        return {
            "accuracy": round(self.accuracy, 4),
            "macro_f1": round(self.macro_f1, 4),
            "folds": self.folds,
            "per_class": {
                name: {k: round(v, 4) for k, v in metrics.items()}
                for name, metrics in self.per_class.items()
            },
            "confusion": self.confusion.tolist(),
            "class_names": self.class_names,
        }


def evaluate(pred, gold, n_classes: int, class_names=None, folds: int = 1) -> EvaluationReport:
    """One-vs-rest P/R/F1 per class plus overall accuracy, all in percent."""
    pred = np.asarray(pred, dtype=np.int64)
    gold = np.asarray(gold, dtype=np.int64)
    if len(pred) != len(gold):
        raise ValueError(f"length mismatch: {len(pred)} predictions vs {len(gold)} gold labels")
    if class_names is None:
        class_names = [str(c) for c in range(n_classes)]
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    for g, p in zip(gold, pred):
        confusion[g, p] += 1
    per_class = {}
    for c in range(n_classes):
        tp = confusion[c, c]
        col = confusion[:, c].sum()
        row = confusion[c, :].sum()
        precision = 100.0 * tp / col if col else 0.0
        recall = 100.0 * tp / row if row else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[class_names[c]] = {"precision": precision, "recall": recall, "f1": f1}
    accuracy = 100.0 * np.trace(confusion) / len(gold) if len(gold) else 0.0
    return EvaluationReport(
        accuracy=accuracy,
        per_class=per_class,
        confusion=confusion,
        folds=folds,
        class_names=list(class_names),
    )


def stratified_kfold(y, k: int, seed: int, class_names=None) -> list[np.ndarray]:
    """Deterministic stratified fold assignment; returns test-index arrays."""
    y = np.asarray(y)
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = check_random_state(seed)
    fold_of = np.empty(len(y), dtype=np.int64)
    for c in np.unique(y):
        idx = np.nonzero(y == c)[0]
        if len(idx) < k:
            name = class_names[c] if class_names else str(c)
            raise ValueError(f"class {name!r} has {len(idx)} examples, fewer than k={k}")
        idx = idx[rng.permutation(len(idx))]
        fold_of[idx] = np.arange(len(idx)) % k
    return [np.nonzero(fold_of == f)[0] for f in range(k)]


def cross_validate(estimator, dataset: Dataset, k: int = 5, seed: int = 0) -> EvaluationReport:
    """Stratified k-fold CV; metrics pooled over all held-out predictions."""
    X, y = dataset.features, dataset.labels
    folds = stratified_kfold(y, k, seed, dataset.class_names)
    pred = np.empty(len(y), dtype=np.int64)
    for test_idx in folds:
        mask = np.ones(len(y), dtype=bool)
        mask[test_idx] = False
        model = clone(estimator)
        model.fit(X[mask], y[mask], n_classes=dataset.n_classes)
        pred[test_idx] = model.predict(X[test_idx])
    report = evaluate(pred, y, dataset.n_classes, dataset.class_names, folds=k)
    return report
