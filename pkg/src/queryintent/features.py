"""Query-log features for intent classification and their matrix layout.

Seven features per record: mean query embedding, mean clicked-url embedding,
click count, query length in wordpieces, snippet token count, unique clicked
domains, and the fraction of query pieces that also occur in the clicked
urls. Column layout is fixed: [query_emb | url_emb | 5 scalars].
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from queryintent.logs import QueryRecord
from queryintent.text.embeddings import EmbeddingTable, embed_text
from queryintent.text.urls import extract_domain, url_words
from queryintent.text.wordpiece import UNK, Vocab, tokenize

SCALAR_NAMES = (
    "click_count",
    "query_length",
    "snippet_token_count",
    "url_domain_count",
    "similarity",
)


@dataclass(frozen=True)
class IntentFeatures:
    query_emb: np.ndarray
    url_emb: np.ndarray
    click_count: int
    query_length: int
    snippet_token_count: int
    url_domain_count: int
    similarity: float

    @property
    def dim(self) -> int:
        return len(self.query_emb)


def extract_features(record: QueryRecord, table: EmbeddingTable, vocab: Vocab) -> IntentFeatures:
    query_pieces = tokenize(record.query, vocab)
    url_pieces: list[str] = []
    snippet_tokens = 0
    domains = set()
    for click in record.clicks:
        url_pieces.extend(tokenize(" ".join(url_words(click.url, include_domain=True)), vocab))
        snippet_tokens += len(tokenize(click.snippet, vocab))
        domain = extract_domain(click.url)
        if domain:
            domains.add(domain)

    unique_query = set(query_pieces) - {UNK}
    unique_url = set(url_pieces) - {UNK}
    if unique_query and record.clicks:
        similarity = len(unique_query & unique_url) / len(unique_query)
    else:
        similarity = 0.0

    return IntentFeatures(
        query_emb=embed_text(query_pieces, table),
        url_emb=embed_text(url_pieces, table),
        click_count=len(record.clicks),
        query_length=len(query_pieces),
        snippet_token_count=snippet_tokens,
        url_domain_count=len(domains),
        similarity=similarity,
    )


def feature_names(dim: int) -> list[str]:
    return (
        [f"q{i}" for i in range(dim)]
        + [f"u{i}" for i in range(dim)]
        + list(SCALAR_NAMES)
    )


def assemble_matrix(features: Sequence[IntentFeatures]) -> np.ndarray:
    """Stack features as N x (2*dim + 5); raw scalars, standardization is the
    learner's job."""
    if not features:
        return np.zeros((0, 0))
    dim = features[0].dim
    rows = []
    for f in features:
        if f.dim != dim or len(f.url_emb) != dim:
            raise ValueError(f"mixed embedding dims: {f.dim} vs {dim}")
        rows.append(
            np.concatenate(
                [
                    f.query_emb,
                    f.url_emb,
                    [
                        f.click_count,
                        f.query_length,
                        f.snippet_token_count,
                        f.url_domain_count,
                        f.similarity,
                    ],
                ]
            )
        )
    return np.vstack(rows)


def save_features_csv(
    query_ids: Sequence[str],
    features: Sequence[IntentFeatures],
    path,
) -> None:
    matrix = assemble_matrix(features)
    dim = features[0].dim if features else 0
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["query_id"] + feature_names(dim))
        for qid, row in zip(query_ids, matrix):
            writer.writerow([qid] + [f"{v:.6f}" for v in row])
