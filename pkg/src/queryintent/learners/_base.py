"""Shared estimator plumbing: standardization and the fit/predict contract.

All classifiers follow the sklearn estimator protocol (get_params/set_params
via BaseEstimator, fit returns self) so they compose with clone() and the
cross-validation harness. The algorithms themselves are implemented here
from scratch on numpy.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from queryintent._validation import check_array, check_feature_dim, check_X_y


class Standardizer:
    """Per-column (mean, stddev) scaler; zero-variance columns get stddev 1."""

    def fit(self, X: np.ndarray) -> "Standardizer":
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.stddev_ = np.where(std > 0, std, 1.0)
        return self

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean_) / self.stddev_

    def as_dict(self) -> dict:
        return {"mean": self.mean_.tolist(), "stddev": self.stddev_.tolist()}

    @classmethod
    def from_dict(cls, payload: dict) -> "Standardizer":
        obj = cls()
        obj.mean_ = np.asarray(payload["mean"], dtype=np.float64)
        obj.stddev_ = np.asarray(payload["stddev"], dtype=np.float64)
        if (obj.stddev_ <= 0).any():
            raise ValueError("standardizer stddev entries must be > 0")
        return obj


class ClassifierBase(BaseEstimator, ClassifierMixin):
    """Fit/predict skeleton: validation, optional standardization, class count."""

    requires_two_classes = False

    def fit(self, X, y, n_classes: int | None = None):
        X, y = check_X_y(X, y)
        self.n_classes_ = int(n_classes) if n_classes else int(y.max()) + 1
        if y.max() >= self.n_classes_:
            raise ValueError("label id outside declared class range")
        if self.requires_two_classes and len(np.unique(y)) < 2:
            raise ValueError(f"{type(self).__name__} needs at least two classes in y")
        self.n_features_in_ = X.shape[1]
        if getattr(self, "standardize", True):
            self.scaler_ = Standardizer().fit(X)
            X = self.scaler_.transform(X)
        else:
            self.scaler_ = None
        self._fit(X, y)
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "n_features_in_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted")
        X = check_array(X)
        check_feature_dim(X, self.n_features_in_)
        if self.scaler_ is not None:
            X = self.scaler_.transform(X)
        return self._predict(X)

    def _fit(self, X: np.ndarray, y: np.ndarray) -> None:
        raise NotImplementedError

    def _predict(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError


def argmax_scores(scores: np.ndarray) -> np.ndarray:
    # np.argmax returns the first maximum, i.e. the smallest class id on ties
    return np.argmax(scores, axis=1).astype(np.int64)
