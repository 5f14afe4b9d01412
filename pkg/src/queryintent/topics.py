"""LDA over wordpiece documents via collapsed Gibbs sampling, plus the
per-topic sampling step that feeds the annotation queue.

Documents concatenate query pieces, click-url path pieces (domain removed so
clusters do not form on host names) and snippet pieces.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import gammaln

from queryintent._validation import check_random_state
from queryintent.logs import QueryRecord
from queryintent.text.urls import url_words
from queryintent.text.wordpiece import UNK, Vocab, tokenize


@dataclass(frozen=True)
class TopicDocument:
    """Token ids of one query's text context ([UNK] pieces dropped)."""

    query_id: str
    token_ids: tuple[int, ...]


def build_doc(record: QueryRecord, vocab: Vocab) -> TopicDocument:
    """Query + click-url-path + snippet pieces as vocab ids, domains excluded."""
    pieces = list(tokenize(record.query, vocab))
    for click in record.clicks:
        path_text = " ".join(url_words(click.url, include_domain=False))
        pieces.extend(tokenize(path_text, vocab))
        pieces.extend(tokenize(click.snippet, vocab))
    ids = tuple(vocab.index(p) for p in pieces if p != UNK)
    return TopicDocument(query_id=record.query_id, token_ids=ids)


class LdaGibbs:
    """Collapsed Gibbs sampler for LDA.

    Counts: ``topic_word_counts_`` (K x V), ``doc_topic_counts_`` (D x K),
    ``topic_totals_`` (K). One ``sweep()`` resamples every token once from
    p(z=k) proportional to (n_dk + alpha) * (n_kw + beta) / (n_k + V beta)
    with the token itself excluded from the counts.
    """

    def __init__(
        self,
        n_topics: int = 50,
        alpha: float | None = None,
        beta: float = 0.01,
        iterations: int = 500,
        likelihood_every: int = 20,
        seed: int = 0,
    ):
        self.n_topics = n_topics
        self.alpha = alpha
        self.beta = beta
        self.iterations = iterations
        self.likelihood_every = likelihood_every
        self.seed = seed

    def initialize(self, docs: Sequence[TopicDocument], vocab_size: int | None = None):
        if self.n_topics < 1:
            raise ValueError("n_topics must be >= 1")
        if not any(doc.token_ids for doc in docs):
            raise ValueError("all documents are empty")
        self.docs_ = list(docs)
        self.alpha_ = self.alpha if self.alpha is not None else 50.0 / self.n_topics
        if vocab_size is None:
            vocab_size = 1 + max(max(d.token_ids) for d in docs if d.token_ids)
        self.vocab_size_ = int(vocab_size)
        self._rng = check_random_state(self.seed)

        K, V, D = self.n_topics, self.vocab_size_, len(docs)
        self.topic_word_counts_ = np.zeros((K, V), dtype=np.int64)
        self.doc_topic_counts_ = np.zeros((D, K), dtype=np.int64)
        self.topic_totals_ = np.zeros(K, dtype=np.int64)
        self.assignments_ = []
        for d, doc in enumerate(self.docs_):
            z = self._rng.integers(0, K, size=len(doc.token_ids))
            self.assignments_.append(z)
            for w, k in zip(doc.token_ids, z):
                self.topic_word_counts_[k, w] += 1
                self.doc_topic_counts_[d, k] += 1
                self.topic_totals_[k] += 1
        return self

    def sweep(self) -> None:
        """One full Gibbs pass over every token."""
        K = self.n_topics
        v_beta = self.vocab_size_ * self.beta
        for d, doc in enumerate(self.docs_):
            z = self.assignments_[d]
            doc_counts = self.doc_topic_counts_[d]
            for i, w in enumerate(doc.token_ids):
                k_old = z[i]
                doc_counts[k_old] -= 1
                self.topic_word_counts_[k_old, w] -= 1
                self.topic_totals_[k_old] -= 1

                p = (doc_counts + self.alpha_) * (
                    (self.topic_word_counts_[:, w] + self.beta)
                    / (self.topic_totals_ + v_beta)
                )
                cdf = np.cumsum(p)
                k_new = int(np.searchsorted(cdf, self._rng.random() * cdf[-1], side="right"))
                k_new = min(k_new, K - 1)

                z[i] = k_new
                doc_counts[k_new] += 1
                self.topic_word_counts_[k_new, w] += 1
                self.topic_totals_[k_new] += 1

    def log_likelihood(self) -> float:
        """Collapsed joint log p(w, z) under the symmetric Dirichlet priors."""
        K, V = self.n_topics, self.vocab_size_
        a, b = self.alpha_, self.beta
        word_part = (
            K * (gammaln(V * b) - V * gammaln(b))
            + gammaln(self.topic_word_counts_ + b).sum()
            - gammaln(self.topic_totals_ + V * b).sum()
        )
        doc_lengths = self.doc_topic_counts_.sum(axis=1)
        doc_part = (
            len(self.docs_) * (gammaln(K * a) - K * gammaln(a))
            + gammaln(self.doc_topic_counts_ + a).sum()
            - gammaln(doc_lengths + K * a).sum()
        )
        return float(word_part + doc_part)

    def fit(self, docs: Sequence[TopicDocument], vocab_size: int | None = None) -> "LdaGibbs":
        self.initialize(docs, vocab_size)
        self.likelihood_history_ = [(0, self.log_likelihood())]
        for it in range(1, self.iterations + 1):
            self.sweep()
            if it % self.likelihood_every == 0 or it == self.iterations:
                self.likelihood_history_.append((it, self.log_likelihood()))
        return self

    def dominant_topic(self, doc_index: int) -> int:
        """Hard cluster id: argmax of the doc-topic counts, lowest topic on ties."""
        return int(np.argmax(self.doc_topic_counts_[doc_index]))

    def memberships(self) -> dict[int, list[str]]:
        """query ids grouped by dominant topic."""
        out: dict[int, list[str]] = {}
        for d, doc in enumerate(self.docs_):
            out.setdefault(self.dominant_topic(d), []).append(doc.query_id)
        return out

    def top_words(self, vocab: Vocab, n: int = 20) -> list[list[tuple[str, int]]]:
        out = []
        for k in range(self.n_topics):
            counts = self.topic_word_counts_[k]
            order = np.argsort(-counts, kind="stable")[:n]
            out.append([(vocab.pieces[w], int(counts[w])) for w in order if counts[w] > 0])
        return out


def save_topic_summary(model: LdaGibbs, vocab: Vocab, path) -> None:
    lines = [
        f"topics\t{model.n_topics}",
        f"alpha\t{model.alpha_:.6f}",
        f"beta\t{model.beta:.6f}",
    ]
    for k, words in enumerate(model.top_words(vocab)):
        rendered = " ".join(f"{piece}:{count}" for piece, count in words)
        lines.append(f"topic\t{k}\t{rendered}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def sample_per_topic(
    memberships: Mapping[int, Iterable[str]],
    m: int,
    seed: int,
) -> list[tuple[str, int]]:
    """Uniformly draw up to m query ids per topic, tagged with the source topic."""
    if m < 1:
        raise ValueError("m must be >= 1")
    rng = check_random_state(seed)
    out: list[tuple[str, int]] = []
    for topic in sorted(memberships):
        members = list(memberships[topic])
        take = min(m, len(members))
        idx = rng.choice(len(members), size=take, replace=False)
        out.extend((members[i], topic) for i in idx)
    return out
