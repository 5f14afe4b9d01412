"""Classifier registry, the trained-model wrapper, and its file format.

Models serialize to a single JSON document: version, kind, class names,
feature dim, the stored standardizer, hyperparameters, and the flattened
parameter arrays of the estimator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from queryintent.learners._base import Standardizer
from queryintent.learners.boosting import AdaBoostClassifier
from queryintent.learners.evaluation import Dataset
from queryintent.learners.linear import LinearSVMClassifier, LogisticRegressionClassifier
from queryintent.learners.mlp import MLPClassifier
from queryintent.learners.neighbors import KNNClassifier
from queryintent.learners.svm import RbfSVMClassifier
from queryintent.learners.trees import DecisionTreeClassifier, RandomForestClassifier, _Tree

FORMAT_VERSION = 1

KINDS = {
    "LogReg": LogisticRegressionClassifier,
    "LinearSVM": LinearSVMClassifier,
    "RbfSVM": RbfSVMClassifier,
    "KNN": KNNClassifier,
    "RandomForest": RandomForestClassifier,
    "AdaBoost": AdaBoostClassifier,
    "MLP": MLPClassifier,
}

_ALIASES = {name.lower(): name for name in KINDS}
_ALIASES.update({"logisticregression": "LogReg", "linearsvc": "LinearSVM", "svm": "LinearSVM"})


def canonical_kind(name: str) -> str:
    key = name.replace("-", "").replace("_", "").lower()
    if key not in _ALIASES:
        raise ValueError(f"unknown classifier kind {name!r}; choose from {sorted(KINDS)}")
    return _ALIASES[key]


def make_classifier(kind: str, seed: int = 0, **hyper):
    cls = KINDS[canonical_kind(kind)]
    params = dict(hyper)
    if "seed" in cls().get_params():
        params.setdefault("seed", seed)
    return cls(**params)


def _kind_of(estimator) -> str:
    for name, cls in KINDS.items():
        if type(estimator) is cls:
            return name
    raise ValueError(f"unregistered estimator type {type(estimator).__name__}")


def _extract_parameters(kind: str, est) -> dict:
    if kind in ("LogReg", "LinearSVM"):
        return {"weights": est.weights_.tolist(), "bias": est.bias_.tolist()}
    if kind == "RbfSVM":
        return {
            "x_train": est.X_train_.tolist(),
            "alphas": est.alphas_.tolist(),
            "signed_y": est.signed_y_.tolist(),
            "b": est.b_.tolist(),
            "gamma": est.gamma_,
        }
    if kind == "KNN":
        return {"x_train": est.X_train_.tolist(), "y_train": est.y_train_.tolist()}
    if kind == "RandomForest":
        return {"trees": [t.as_dict() for t in est.trees_]}
    if kind == "AdaBoost":
        return {
            "stumps": [
                [[alpha, int(f), t, int(p)] for alpha, f, t, p in stumps]
                for stumps in est.stumps_
            ]
        }
    if kind == "MLP":
        return {k: v.tolist() for k, v in est.get_parameters().items()}
    raise ValueError(f"no serializer for kind {kind}")


def _restore_parameters(kind: str, est, payload: dict) -> None:
    if kind in ("LogReg", "LinearSVM"):
        est.weights_ = np.asarray(payload["weights"], dtype=np.float64)
        est.bias_ = np.asarray(payload["bias"], dtype=np.float64)
    elif kind == "RbfSVM":
        est.X_train_ = np.asarray(payload["x_train"], dtype=np.float64)
        est.alphas_ = np.asarray(payload["alphas"], dtype=np.float64)
        est.signed_y_ = np.asarray(payload["signed_y"], dtype=np.float64)
        est.b_ = np.asarray(payload["b"], dtype=np.float64)
        est.gamma_ = float(payload["gamma"])
    elif kind == "KNN":
        est.X_train_ = np.asarray(payload["x_train"], dtype=np.float64)
        est.y_train_ = np.asarray(payload["y_train"], dtype=np.int64)
    elif kind == "RandomForest":
        est.trees_ = [_Tree.from_dict(t) for t in payload["trees"]]
    elif kind == "AdaBoost":
        est.stumps_ = [
            [(float(a), int(f), float(t), int(p)) for a, f, t, p in stumps]
            for stumps in payload["stumps"]
        ]
    elif kind == "MLP":
        est.set_parameters(payload)
    else:
        raise ValueError(f"no loader for kind {kind}")


@dataclass
class TrainedModel:
    """A fitted classifier plus the label names it predicts."""

    kind: str
    estimator: object
    class_names: list[str]

    @property
    def feature_dim(self) -> int:
        return self.estimator.n_features_in_

    def predict(self, X) -> np.ndarray:
        return self.estimator.predict(X)

    def predict_names(self, X) -> list[str]:
        return [self.class_names[c] for c in self.predict(X)]

    def save(self, path) -> None:
        est = self.estimator
        doc = {
            "version": FORMAT_VERSION,
            "kind": self.kind,
            "class_names": self.class_names,
            "feature_dim": int(est.n_features_in_),
            "standardizer": est.scaler_.as_dict() if est.scaler_ is not None else None,
            "hyperparameters": est.get_params(),
            "parameters": _extract_parameters(self.kind, est),
        }
        Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "TrainedModel":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported model format version {doc.get('version')}")
        kind = doc["kind"]
        est = KINDS[kind](**doc["hyperparameters"])
        est.n_features_in_ = int(doc["feature_dim"])
        est.n_classes_ = len(doc["class_names"])
        est.scaler_ = (
            Standardizer.from_dict(doc["standardizer"]) if doc["standardizer"] else None
        )
        _restore_parameters(kind, est, doc["parameters"])
        return cls(kind=kind, estimator=est, class_names=list(doc["class_names"]))


def train(kind: str, dataset: Dataset, hyper: dict | None = None, seed: int = 0) -> TrainedModel:
    """Build, fit and wrap a classifier of the given kind."""
    kind = canonical_kind(kind)
    est = make_classifier(kind, seed=seed, **(hyper or {}))
    est.fit(dataset.features, dataset.labels, n_classes=dataset.n_classes)
    return TrainedModel(kind=kind, estimator=est, class_names=list(dataset.class_names))
