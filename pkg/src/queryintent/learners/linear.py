"""Linear models: full-batch logistic regression and Pegasos-trained linear SVM."""

from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from queryintent._validation import check_random_state
from queryintent.learners._base import ClassifierBase, argmax_scores


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


class LogisticRegressionClassifier(ClassifierBase):
    """Multinomial logistic regression, full-batch gradient descent with L2.

    The step size backtracks (halves) whenever a step would increase the
    regularized loss, so the recorded ``loss_history_`` is non-increasing.
    """

    def __init__(
        self,
        learning_rate: float = 0.1,
        epochs: int = 500,
        l2: float = 1e-4,
        standardize: bool = True,
        seed: int = 0,
    ):
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.l2 = l2
        self.standardize = standardize
        self.seed = seed

    def _loss(self, X, y, W, b):
        z = X @ W.T + b
        n = len(X)
        ce = -(z[np.arange(n), y] - logsumexp(z, axis=1)).sum() / n
        return ce + 0.5 * self.l2 * (W**2).sum()

    def _fit(self, X, y):
        n, d = X.shape
        C = self.n_classes_
        W = np.zeros((C, d))
        b = np.zeros(C)
        Y = np.zeros((n, C))
        Y[np.arange(n), y] = 1.0

        lr = self.learning_rate
        loss = self._loss(X, y, W, b)
        self.loss_history_ = [loss]
        for _ in range(self.epochs):
            P = _softmax(X @ W.T + b)
            G = (P - Y) / n
            grad_w = G.T @ X + self.l2 * W
            grad_b = G.sum(axis=0)
            while True:
                W_new = W - lr * grad_w
                b_new = b - lr * grad_b
                new_loss = self._loss(X, y, W_new, b_new)
                if new_loss <= loss or lr < 1e-12:
                    break
                lr /= 2
            if new_loss > loss:
                break
            W, b, loss = W_new, b_new, new_loss
            self.loss_history_.append(loss)
        self.weights_ = W
        self.bias_ = b

    def _predict(self, X):
        return argmax_scores(X @ self.weights_.T + self.bias_)

    def decision_function(self, X):
        if self.scaler_ is not None:
            X = self.scaler_.transform(X)
        return X @ self.weights_.T + self.bias_


class LinearSVMClassifier(ClassifierBase):
    """Linear SVM trained with Pegasos SGD on the hinge loss, one-vs-rest.

    The bias is folded into the weight vector as a constant feature and
    regularized with it, which keeps the 1/(lambda*t) step schedule stable.
    """

    requires_two_classes = True

    def __init__(
        self,
        l2: float = 1e-4,
        epochs: int = 20,
        standardize: bool = True,
        seed: int = 0,
    ):
        self.l2 = l2
        self.epochs = epochs
        self.standardize = standardize
        self.seed = seed

    def _fit(self, X, y):
        rng = check_random_state(self.seed)
        n, d = X.shape
        Xa = np.hstack([X, np.ones((n, 1))])
        weights = np.zeros((self.n_classes_, d))
        bias = np.zeros(self.n_classes_)
        inv_sqrt_l2 = 1.0 / np.sqrt(self.l2)
        for c in range(self.n_classes_):
            yc = np.where(y == c, 1.0, -1.0)
            w = np.zeros(d + 1)
            t = 0
            for _ in range(self.epochs):
                for i in rng.permutation(n):
                    t += 1
                    eta = 1.0 / (self.l2 * t)
                    margin = yc[i] * (w @ Xa[i])
                    w *= 1.0 - eta * self.l2
                    if margin < 1.0:
                        w += eta * yc[i] * Xa[i]
                    norm = np.linalg.norm(w)
                    if norm > inv_sqrt_l2:
                        w *= inv_sqrt_l2 / norm
            weights[c] = w[:d]
            bias[c] = w[d]
        self.weights_ = weights
        self.bias_ = bias

    def _predict(self, X):
        return argmax_scores(X @ self.weights_.T + self.bias_)

    def decision_function(self, X):
        if self.scaler_ is not None:
            X = self.scaler_.transform(X)
        return X @ self.weights_.T + self.bias_
