"""CART decision trees (Gini) and a bagged random forest built on them."""

from __future__ import annotations

import numpy as np

from queryintent._validation import check_random_state
from queryintent.learners._base import ClassifierBase


class _Tree:
    """Flat-array binary tree: internal nodes split on feature <= threshold."""

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.leaf_class: list[int] = []

    def add_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.leaf_class.append(-1)
        return len(self.feature) - 1

    def predict_one(self, x: np.ndarray) -> int:
        node = 0
        while self.feature[node] >= 0:
            if x[self.feature[node]] <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return self.leaf_class[node]

    def depth(self) -> int:
        """Edges on the longest root-to-leaf path."""
        if not self.feature:
            return 0
        stack = [(0, 0)]
        deepest = 0
        while stack:
            node, d = stack.pop()
            if self.feature[node] < 0:
                deepest = max(deepest, d)
            else:
                stack.append((self.left[node], d + 1))
                stack.append((self.right[node], d + 1))
        return deepest

    def as_dict(self) -> dict:
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left,
            "right": self.right,
            "leaf_class": self.leaf_class,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "_Tree":
        tree = cls()
        tree.feature = [int(v) for v in payload["feature"]]
        tree.threshold = [float(v) for v in payload["threshold"]]
        tree.left = [int(v) for v in payload["left"]]
        tree.right = [int(v) for v in payload["right"]]
        tree.leaf_class = [int(v) for v in payload["leaf_class"]]
        return tree


def _gini_split_gain(col: np.ndarray, y: np.ndarray, n_classes: int):
    """Best threshold for one feature; returns (gain, threshold) or None."""
    order = np.argsort(col, kind="stable")
    xs = col[order]
    ys = y[order]
    n = len(ys)
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), ys] = 1.0
    left_counts = np.cumsum(onehot, axis=0)  # counts for split after position i
    total = left_counts[-1]

    # candidate split points: between distinct consecutive values
    boundaries = np.nonzero(xs[:-1] < xs[1:])[0]
    if len(boundaries) == 0:
        return None
    nl = boundaries + 1.0
    nr = n - nl
    lc = left_counts[boundaries]
    rc = total - lc
    gini_l = 1.0 - ((lc / nl[:, None]) ** 2).sum(axis=1)
    gini_r = 1.0 - ((rc / nr[:, None]) ** 2).sum(axis=1)
    parent = 1.0 - ((total / n) ** 2).sum()
    gain = parent - (nl / n) * gini_l - (nr / n) * gini_r
    best = int(np.argmax(gain))
    if gain[best] <= 1e-12:
        return None
    b = boundaries[best]
    threshold = (xs[b] + xs[b + 1]) / 2.0
    return float(gain[best]), threshold


class DecisionTreeClassifier(ClassifierBase):
    """Single CART tree; max_features=None looks at every feature per split."""

    def __init__(
        self,
        max_depth: int | None = None,
        max_features: int | str | None = None,
        standardize: bool = False,
        seed: int = 0,
    ):
        self.max_depth = max_depth
        self.max_features = max_features
        self.standardize = standardize
        self.seed = seed

    def _n_split_features(self, d: int) -> int:
        if self.max_features is None:
            return d
        if self.max_features == "sqrt":
            return max(1, int(np.sqrt(d)))
        return min(d, int(self.max_features))

    def _fit(self, X, y):
        rng = check_random_state(self.seed)
        self.tree_ = grow_tree(
            X, y, self.n_classes_, self.max_depth, self._n_split_features(X.shape[1]), rng
        )

    def _predict(self, X):
        return np.array([self.tree_.predict_one(x) for x in X], dtype=np.int64)


def grow_tree(X, y, n_classes, max_depth, n_split_features, rng) -> _Tree:
    tree = _Tree()

    def majority(node_y):
        return int(np.argmax(np.bincount(node_y, minlength=n_classes)))

    def build(idx, depth) -> int:
        node = tree.add_node()
        node_y = y[idx]
        if (
            len(idx) < 2
            or (max_depth is not None and depth >= max_depth)
            or len(np.unique(node_y)) == 1
        ):
            tree.leaf_class[node] = majority(node_y)
            return node
        d = X.shape[1]
        if n_split_features < d:
            feats = np.sort(rng.choice(d, size=n_split_features, replace=False))
        else:
            feats = np.arange(d)
        best = None
        for f in feats:
            res = _gini_split_gain(X[idx, f], node_y, n_classes)
            if res is None:
                continue
            gain, threshold = res
            if best is None or gain > best[0] + 1e-12:
                best = (gain, f, threshold)
        if best is None:
            tree.leaf_class[node] = majority(node_y)
            return node
        _, f, threshold = best
        mask = X[idx, f] <= threshold
        tree.feature[node] = int(f)
        tree.threshold[node] = float(threshold)
        tree.left[node] = build(idx[mask], depth + 1)
        tree.right[node] = build(idx[~mask], depth + 1)
        return node

    build(np.arange(len(y)), 0)
    return tree


class RandomForestClassifier(ClassifierBase):
    """Bagged CART trees with per-split feature subsampling; ties vote low id."""

    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int | None = 12,
        max_features: int | str | None = "sqrt",
        bootstrap: bool = True,
        standardize: bool = False,
        seed: int = 0,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.standardize = standardize
        self.seed = seed

    def _fit(self, X, y):
        rng = check_random_state(self.seed)
        d = X.shape[1]
        if self.max_features is None:
            n_feats = d
        elif self.max_features == "sqrt":
            n_feats = max(1, int(np.sqrt(d)))
        else:
            n_feats = min(d, int(self.max_features))
        self.trees_ = []
        n = len(y)
        for _ in range(self.n_trees):
            if self.bootstrap:
                idx = rng.integers(0, n, size=n)
            else:
                idx = np.arange(n)
            self.trees_.append(
                grow_tree(X[idx], y[idx], self.n_classes_, self.max_depth, n_feats, rng)
            )

    def _predict(self, X):
        votes = np.zeros((len(X), self.n_classes_), dtype=np.int64)
        for tree in self.trees_:
            for i, x in enumerate(X):
                votes[i, tree.predict_one(x)] += 1
        return np.argmax(votes, axis=1).astype(np.int64)
