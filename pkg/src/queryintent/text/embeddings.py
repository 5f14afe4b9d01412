"""Skip-gram negative-sampling embeddings and the piece-to-vector table.

The trainer is a from-scratch numpy implementation: input/output matrices,
unigram^0.75 negative sampling, reduced windows, linearly decayed learning
rate. Updates are applied one document at a time (gradients within a document
share the same parameters), which keeps the run deterministic and fast at
desk scale.
"""

from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.special import expit

from queryintent._validation import check_random_state


class EmbeddingTable:
    """Fixed-dimension map from wordpiece to dense vector."""

    def __init__(self, dim: int, vectors: dict[str, np.ndarray] | None = None):
        self.dim = int(dim)
        self.vectors: dict[str, np.ndarray] = {}
        if vectors:
            for piece, vec in vectors.items():
                self[piece] = vec

    def __setitem__(self, piece: str, vec) -> None:
        arr = np.asarray(vec, dtype=np.float64)
        if arr.shape != (self.dim,):
            raise ValueError(f"vector for {piece!r} has length {arr.size}, expected {self.dim}")
        if not np.isfinite(arr).all():
            raise ValueError(f"vector for {piece!r} is not finite")
        self.vectors[piece] = arr

    def __contains__(self, piece: str) -> bool:
        return piece in self.vectors

    def __getitem__(self, piece: str) -> np.ndarray:
        return self.vectors[piece]

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, piece: str):
        return self.vectors.get(piece)


def embed_text(pieces: Sequence[str], table: EmbeddingTable) -> np.ndarray:
    """Mean vector of the in-table pieces; zero vector when none are known."""
    rows = [table.vectors[p] for p in pieces if p in table.vectors]
    if not rows:
        return np.zeros(table.dim)
    return np.mean(rows, axis=0)


def save_embeddings(table: EmbeddingTable, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for piece in sorted(table.vectors):
            vals = " ".join(f"{v:.6f}" for v in table.vectors[piece])
            fh.write(f"{piece} {vals}\n")


def load_embeddings(path, dim: int | None = None) -> EmbeddingTable:
    """Load the text format ("piece v1 ... vd" per line); dim must be consistent.

    An empty file yields an empty table with the configured ``dim`` (0 when
    not given).
    """
    table: EmbeddingTable | None = None
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            piece, vals = parts[0], parts[1:]
            if table is None:
                table = EmbeddingTable(len(vals))
            if len(vals) != table.dim:
                raise ValueError(
                    f"{path}: line {lineno}: vector length {len(vals)}, expected {table.dim}"
                )
            table[piece] = [float(v) for v in vals]
    if table is None:
        table = EmbeddingTable(dim or 0)
    return table


class SkipGramEmbeddings:
    """Skip-gram with negative sampling, trained single-worker for determinism.

    Parameters mirror the classic word2vec knobs; ``epoch_losses_`` records
    the mean negative-sampling loss per epoch after ``fit``.
    """

    def __init__(
        self,
        dim: int = 50,
        window: int = 4,
        negatives: int = 5,
        epochs: int = 5,
        learning_rate: float = 0.025,
        min_learning_rate: float = 1e-4,
        seed: int = 0,
    ):
        self.dim = dim
        self.window = window
        self.negatives = negatives
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.min_learning_rate = min_learning_rate
        self.seed = seed

    def get_params(self) -> dict:
        return {
            "dim": self.dim,
            "window": self.window,
            "negatives": self.negatives,
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "min_learning_rate": self.min_learning_rate,
            "seed": self.seed,
        }

    def fit(self, docs: Iterable[Sequence[str]]) -> "SkipGramEmbeddings":
        docs = [list(d) for d in docs]
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not docs or all(len(d) == 0 for d in docs):
            raise ValueError("empty corpus")
        rng = check_random_state(self.seed)

        freq = Counter(tok for doc in docs for tok in doc)
        self.index_ = {
            tok: i for i, (tok, _) in enumerate(sorted(freq.items(), key=lambda kv: (-kv[1], kv[0])))
        }
        pieces = list(self.index_)
        encoded = [np.array([self.index_[t] for t in doc], dtype=np.int64) for doc in docs]

        counts = np.array([freq[p] for p in pieces], dtype=np.float64)
        noise = counts**0.75
        self._noise_cdf = np.cumsum(noise / noise.sum())

        V = len(pieces)
        w_in = (rng.random((V, self.dim)) - 0.5) / self.dim
        w_out = np.zeros((V, self.dim))

        total_positions = sum(len(d) for d in encoded) * self.epochs
        position = 0
        self.epoch_losses_ = []
        for _ in range(self.epochs):
            loss_sum = 0.0
            pair_count = 0
            for doc in encoded:
                if len(doc) < 1:
                    continue
                alpha0 = self._alpha(position, total_positions)
                position += len(doc)
                loss, pairs = self._train_doc(doc, w_in, w_out, alpha0, rng)
                loss_sum += loss
                pair_count += pairs
            self.epoch_losses_.append(loss_sum / max(pair_count, 1))

        self.table_ = EmbeddingTable(self.dim, {p: w_in[i] for p, i in self.index_.items()})
        return self

    def _alpha(self, position: int, total: int) -> float:
        frac = position / max(total, 1)
        return max(self.min_learning_rate, self.learning_rate * (1.0 - frac))

    def _train_doc(self, doc, w_in, w_out, alpha, rng) -> tuple[float, int]:
        L = len(doc)
        spans = rng.integers(1, self.window + 1, size=L)
        centers = []
        contexts = []
        for i in range(L):
            lo = max(0, i - spans[i])
            hi = min(L, i + spans[i] + 1)
            for j in range(lo, hi):
                if j != i:
                    centers.append(doc[i])
                    contexts.append(doc[j])
        if not centers:
            return 0.0, 0
        centers = np.array(centers, dtype=np.int64)
        contexts = np.array(contexts, dtype=np.int64)
        P = len(centers)
        negs = np.searchsorted(self._noise_cdf, rng.random((P, self.negatives)))
        targets = np.concatenate([contexts[:, None], negs], axis=1)  # (P, 1+neg)

        l1 = w_in[centers]  # (P, dim)
        t_vecs = w_out[targets]  # (P, 1+neg, dim)
        scores = np.einsum("pd,pkd->pk", l1, t_vecs)
        probs = expit(scores)
        labels = np.zeros_like(probs)
        labels[:, 0] = 1.0
        g = (labels - probs) * alpha

        np.add.at(w_out, targets.ravel(), (g[:, :, None] * l1[:, None, :]).reshape(-1, self.dim))
        np.add.at(w_in, centers, np.einsum("pk,pkd->pd", g, t_vecs))

        # -log sigma(s_pos) - sum log sigma(-s_neg), via logaddexp for stability
        loss = np.logaddexp(0.0, -scores[:, 0]).sum() + np.logaddexp(0.0, scores[:, 1:]).sum()
        return float(loss), P

    @property
    def table(self) -> EmbeddingTable:
        if not hasattr(self, "table_"):
            raise RuntimeError("embeddings not trained; call fit first")
        return self.table_


def train_embeddings(
    corpus: Iterable[Sequence[str]],
    dim: int = 50,
    window: int = 4,
    negatives: int = 5,
    epochs: int = 5,
    learning_rate: float = 0.025,
    seed: int = 0,
) -> EmbeddingTable:
    """Train skip-gram embeddings over tokenized documents and return the table."""
    model = SkipGramEmbeddings(
        dim=dim,
        window=window,
        negatives=negatives,
        epochs=epochs,
        learning_rate=learning_rate,
        seed=seed,
    )
    return model.fit(corpus).table
