"""Gaussian-kernel SVM trained with simplified SMO, one-vs-rest."""

from __future__ import annotations

import numpy as np

from queryintent._validation import check_random_state
from queryintent.learners._base import ClassifierBase, argmax_scores


def _rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    sq = (A**2).sum(axis=1)[:, None] + (B**2).sum(axis=1)[None, :] - 2.0 * A @ B.T
    np.clip(sq, 0.0, None, out=sq)
    return np.exp(-gamma * sq)


class RbfSVMClassifier(ClassifierBase):
    """RBF-kernel SVM; dual variables solved by Platt's simplified SMO.

    gamma=None means 1/D. Desk-scale solver: the full kernel matrix is held
    in memory.
    """

    requires_two_classes = True

    def __init__(
        self,
        C: float = 1.0,
        gamma: float | None = None,
        tol: float = 1e-3,
        max_passes: int = 5,
        max_iter: int = 200,
        standardize: bool = True,
        seed: int = 0,
    ):
        self.C = C
        self.gamma = gamma
        self.tol = tol
        self.max_passes = max_passes
        self.max_iter = max_iter
        self.standardize = standardize
        self.seed = seed

    def _fit(self, X, y):
        rng = check_random_state(self.seed)
        n, d = X.shape
        self.gamma_ = self.gamma if self.gamma is not None else 1.0 / d
        K = _rbf_kernel(X, X, self.gamma_)
        self.X_train_ = X
        self.alphas_ = np.zeros((self.n_classes_, n))
        self.signed_y_ = np.zeros((self.n_classes_, n))
        self.b_ = np.zeros(self.n_classes_)
        for c in range(self.n_classes_):
            yc = np.where(y == c, 1.0, -1.0)
            alpha, b = self._smo_binary(K, yc, rng)
            self.alphas_[c] = alpha
            self.signed_y_[c] = yc
            self.b_[c] = b

    def _smo_binary(self, K, y, rng):
        n = K.shape[0]
        alpha = np.zeros(n)
        b = 0.0
        passes = 0
        it = 0
        while passes < self.max_passes and it < self.max_iter:
            it += 1
            num_changed = 0
            for i in range(n):
                E_i = float((alpha * y) @ K[:, i] + b - y[i])
                r_i = E_i * y[i]
                if (r_i < -self.tol and alpha[i] < self.C) or (r_i > self.tol and alpha[i] > 0):
                    j = int(rng.integers(0, n - 1))
                    if j >= i:
                        j += 1
                    E_j = float((alpha * y) @ K[:, j] + b - y[j])
                    a_i_old, a_j_old = alpha[i], alpha[j]
                    if y[i] != y[j]:
                        L = max(0.0, a_j_old - a_i_old)
                        H = min(self.C, self.C + a_j_old - a_i_old)
                    else:
                        L = max(0.0, a_i_old + a_j_old - self.C)
                        H = min(self.C, a_i_old + a_j_old)
                    if L >= H:
                        continue
                    eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
                    if eta >= 0:
                        continue
                    a_j = a_j_old - y[j] * (E_i - E_j) / eta
                    a_j = min(H, max(L, a_j))
                    if abs(a_j - a_j_old) < 1e-5:
                        continue
                    a_i = a_i_old + y[i] * y[j] * (a_j_old - a_j)
                    alpha[i], alpha[j] = a_i, a_j
                    b1 = b - E_i - y[i] * (a_i - a_i_old) * K[i, i] - y[j] * (a_j - a_j_old) * K[i, j]
                    b2 = b - E_j - y[i] * (a_i - a_i_old) * K[i, j] - y[j] * (a_j - a_j_old) * K[j, j]
                    if 0 < a_i < self.C:
                        b = b1
                    elif 0 < a_j < self.C:
                        b = b2
                    else:
                        b = (b1 + b2) / 2.0
                    num_changed += 1
            passes = passes + 1 if num_changed == 0 else 0
        return alpha, b

    def _predict(self, X):
        K = _rbf_kernel(X, self.X_train_, self.gamma_)
        scores = K @ (self.alphas_ * self.signed_y_).T + self.b_
        return argmax_scores(scores)
