"""Single-hidden-layer perceptron: ReLU, softmax output, mini-batch SGD."""

from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from queryintent._validation import check_random_state
from queryintent.learners._base import ClassifierBase, argmax_scores


class MLPClassifier(ClassifierBase):
    """One hidden ReLU layer trained with SGD on softmax cross-entropy.

    ``loss_and_gradients`` exposes the exact backprop quantities so the
    gradients can be checked against finite differences.
    """

    def __init__(
        self,
        hidden: int = 100,
        learning_rate: float = 0.01,
        epochs: int = 200,
        batch_size: int = 32,
        standardize: bool = True,
        seed: int = 0,
    ):
        self.hidden = hidden
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.standardize = standardize
        self.seed = seed

    def _init_params(self, d: int, rng) -> None:
        self.W1_ = rng.normal(0.0, np.sqrt(2.0 / d), size=(d, self.hidden))
        self.b1_ = np.zeros(self.hidden)
        self.W2_ = rng.normal(0.0, np.sqrt(2.0 / self.hidden), size=(self.hidden, self.n_classes_))
        self.b2_ = np.zeros(self.n_classes_)

    def loss_and_gradients(self, X: np.ndarray, y: np.ndarray):
        """Mean cross-entropy and its gradients w.r.t. W1, b1, W2, b2."""
        n = len(X)
        Z1 = X @ self.W1_ + self.b1_
        A1 = np.maximum(Z1, 0.0)
        Z2 = A1 @ self.W2_ + self.b2_
        loss = float(-(Z2[np.arange(n), y] - logsumexp(Z2, axis=1)).sum() / n)

        P = np.exp(Z2 - logsumexp(Z2, axis=1, keepdims=True))
        P[np.arange(n), y] -= 1.0
        dZ2 = P / n
        dW2 = A1.T @ dZ2
        db2 = dZ2.sum(axis=0)
        dA1 = dZ2 @ self.W2_.T
        dZ1 = dA1 * (Z1 > 0.0)
        dW1 = X.T @ dZ1
        db1 = dZ1.sum(axis=0)
        return loss, {"W1": dW1, "b1": db1, "W2": dW2, "b2": db2}

    def _fit(self, X, y):
        rng = check_random_state(self.seed)
        n, d = X.shape
        self._init_params(d, rng)
        self.loss_history_ = []
        for _ in range(self.epochs):
            order = rng.permutation(n)
            epoch_loss = 0.0
            batches = 0
            for start in range(0, n, self.batch_size):
                idx = order[start : start + self.batch_size]
                loss, grads = self.loss_and_gradients(X[idx], y[idx])
                self.W1_ -= self.learning_rate * grads["W1"]
                self.b1_ -= self.learning_rate * grads["b1"]
                self.W2_ -= self.learning_rate * grads["W2"]
                self.b2_ -= self.learning_rate * grads["b2"]
                epoch_loss += loss
                batches += 1
            self.loss_history_.append(epoch_loss / max(batches, 1))

    def _scores(self, X):
        A1 = np.maximum(X @ self.W1_ + self.b1_, 0.0)
        return A1 @ self.W2_ + self.b2_

    def _predict(self, X):
        return argmax_scores(self._scores(X))

    def get_parameters(self) -> dict[str, np.ndarray]:
        return {"W1": self.W1_, "b1": self.b1_, "W2": self.W2_, "b2": self.b2_}

    def set_parameters(self, params: dict[str, np.ndarray]) -> None:
        self.W1_ = np.asarray(params["W1"], dtype=np.float64)
        self.b1_ = np.asarray(params["b1"], dtype=np.float64)
        self.W2_ = np.asarray(params["W2"], dtype=np.float64)
        self.b2_ = np.asarray(params["b2"], dtype=np.float64)
