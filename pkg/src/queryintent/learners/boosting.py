"""AdaBoost over depth-1 stumps, one-vs-rest for multiclass."""

from __future__ import annotations

import numpy as np

from queryintent.learners._base import ClassifierBase, argmax_scores

_EPS = 1e-10


def _best_stump(X: np.ndarray, y_pm: np.ndarray, w: np.ndarray, orders: list[np.ndarray]):
    """Weighted-error-minimizing stump; ties go to the lowest feature/threshold.

    Returns (error, feature, threshold, polarity). polarity +1 predicts +1 on
    the high side of the threshold, -1 predicts +1 on the low side.
    """
    best = None
    n = len(y_pm)
    w_pos_total = w[y_pm > 0].sum()
    w_neg_total = w.sum() - w_pos_total
    for f, order in enumerate(orders):
        xs = X[order, f]
        ws = w[order]
        ys = y_pm[order]
        boundaries = np.nonzero(xs[:-1] < xs[1:])[0]
        if len(boundaries) == 0:
            continue
        wpos_cum = np.cumsum(np.where(ys > 0, ws, 0.0))
        wneg_cum = np.cumsum(np.where(ys < 0, ws, 0.0))
        # polarity +1: left side predicted -1, so errors are left positives
        # plus right negatives
        err_hi = wpos_cum[boundaries] + (w_neg_total - wneg_cum[boundaries])
        err_lo = (w_pos_total + w_neg_total) - err_hi
        for errs, polarity in ((err_hi, 1), (err_lo, -1)):
            i = int(np.argmin(errs))
            err = float(errs[i])
            if best is None or err < best[0] - 1e-12:
                b = boundaries[i]
                threshold = (xs[b] + xs[b + 1]) / 2.0
                best = (err, f, threshold, polarity)
    return best


def _stump_predict(X: np.ndarray, feature: int, threshold: float, polarity: int) -> np.ndarray:
    high = X[:, feature] > threshold
    return np.where(high, polarity, -polarity).astype(np.float64)


class AdaBoostClassifier(ClassifierBase):
    """Discrete AdaBoost with decision stumps.

    A round halts training when no stump beats weighted error 0.5; a perfect
    stump is added and ends the run. ``stump_errors_`` records the per-round
    weighted errors of the selected stumps.
    """

    requires_two_classes = True

    def __init__(self, rounds: int = 50, standardize: bool = False, seed: int = 0):
        self.rounds = rounds
        self.standardize = standardize
        self.seed = seed

    def _fit(self, X, y):
        orders = [np.argsort(X[:, f], kind="stable") for f in range(X.shape[1])]
        self.stumps_ = []  # per class: list of (alpha, feature, threshold, polarity)
        self.stump_errors_ = []
        for c in range(self.n_classes_):
            y_pm = np.where(y == c, 1.0, -1.0)
            stumps, errors = self._boost_binary(X, y_pm, orders)
            self.stumps_.append(stumps)
            self.stump_errors_.append(errors)

    def _boost_binary(self, X, y_pm, orders):
        n = len(y_pm)
        w = np.full(n, 1.0 / n)
        stumps = []
        errors = []
        for _ in range(self.rounds):
            found = _best_stump(X, y_pm, w, orders)
            if found is None:
                break
            err, feature, threshold, polarity = found
            if err >= 0.5:
                break
            # cumulative float error can dip a hair below zero on a perfect stump
            errors.append(max(err, 0.0))
            err = min(max(err, _EPS), 1.0 - _EPS)
            alpha = 0.5 * np.log((1.0 - err) / err)
            stumps.append((alpha, feature, threshold, polarity))
            h = _stump_predict(X, feature, threshold, polarity)
            w *= np.exp(-alpha * y_pm * h)
            w /= w.sum()
            if err <= _EPS:
                break
        return stumps, errors

    def _class_scores(self, X):
        scores = np.zeros((len(X), self.n_classes_))
        for c, stumps in enumerate(self.stumps_):
            for alpha, feature, threshold, polarity in stumps:
                scores[:, c] += alpha * _stump_predict(X, feature, threshold, polarity)
        return scores

    def _predict(self, X):
        return argmax_scores(self._class_scores(X))
