"""k-nearest-neighbors classifier (Euclidean, deterministic tie-breaking)."""

from __future__ import annotations

import numpy as np

from queryintent.learners._base import ClassifierBase


class KNNClassifier(ClassifierBase):
    """Majority vote over the k nearest training points.

    Distance ties resolve to the lower training index; vote ties to the
    smallest class id, so prediction is a pure function of the inputs.
    """

    def __init__(self, k: int = 5, standardize: bool = True):
        self.k = k
        self.standardize = standardize

    def _fit(self, X, y):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        self.X_train_ = X
        self.y_train_ = y

    def _predict(self, X):
        k = min(self.k, len(self.X_train_))
        sq = (
            (X**2).sum(axis=1)[:, None]
            + (self.X_train_**2).sum(axis=1)[None, :]
            - 2.0 * X @ self.X_train_.T
        )
        out = np.empty(len(X), dtype=np.int64)
        for i in range(len(X)):
            # stable sort keeps lower train index first on equal distance
            nearest = np.argsort(sq[i], kind="stable")[:k]
            votes = np.bincount(self.y_train_[nearest], minlength=self.n_classes_)
            out[i] = int(np.argmax(votes))
        return out
