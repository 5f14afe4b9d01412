"""Input validation helpers shared by the estimators and pipeline stages."""

from __future__ import annotations

import numbers

import numpy as np


def check_random_state(seed) -> np.random.Generator:
    """Turn an int seed or Generator into a numpy Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, numbers.Integral):
        return np.random.default_rng(seed)
    raise ValueError(f"cannot use {seed!r} to seed a Generator")


def check_array(X, *, name: str = "X", ndim: int = 2, dtype=np.float64) -> np.ndarray:
    """Coerce to a finite ndarray of the expected rank."""
    arr = np.asarray(X, dtype=dtype)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains NaN or infinite values")
    return arr


def check_X_y(X, y):
    """Validate a feature matrix and integer label vector together."""
    X = check_array(X)
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError(f"y must be 1-dimensional, got shape {y.shape}")
    if len(y) != X.shape[0]:
        raise ValueError(f"X and y length mismatch: {X.shape[0]} vs {len(y)}")
    if len(y) == 0:
        raise ValueError("empty training set")
    if not np.issubdtype(y.dtype, np.integer):
        y_int = y.astype(np.int64)
        if not np.array_equal(y_int, y):
            raise ValueError("y must contain integer class ids")
        y = y_int
    if y.min() < 0:
        raise ValueError("class ids must be non-negative")
    return X, y.astype(np.int64)


def check_feature_dim(X: np.ndarray, expected: int) -> None:
    if X.shape[1] != expected:
        raise ValueError(f"expected D={expected}, got {X.shape[1]}")
