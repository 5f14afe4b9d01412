"""Inter-annotator agreement (Fleiss' kappa) over collected labels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from queryintent.analysis import IntentLabel

SKIP = "Skip"
CATEGORY_LABELS: tuple[str, ...] = tuple(label.value for label in IntentLabel)
LABEL_CHOICES: tuple[str, ...] = CATEGORY_LABELS + (SKIP,)


def fleiss_kappa(table: Sequence[Sequence[int]] | np.ndarray) -> float:
    """Fleiss' kappa for a count table of shape (items, categories).

    Every row must sum to the same number of raters k >= 2.  When raters
    agree perfectly on a single category for every item, chance agreement
    equals 1 and the usual ratio is undefined; that case is reported as 1.0.
    """
    counts = np.asarray(table, dtype=float)
    if counts.ndim != 2 or counts.shape[0] == 0 or counts.shape[1] == 0:
        raise ValueError("agreement table must be a non-empty 2-D array")
    if np.any(counts < 0) or np.any(counts != np.round(counts)):
        raise ValueError("agreement table entries must be non-negative integers")
    row_sums = counts.sum(axis=1)
    k = row_sums[0]
    bad = np.nonzero(row_sums != k)[0]
    if bad.size:
        raise ValueError(
            f"row {int(bad[0])} sums to {int(row_sums[bad[0]])}, expected {int(k)} raters"
        )
    if k < 2:
        raise ValueError("need at least 2 raters per item")

    n = counts.shape[0]
    p_i = ((counts * counts).sum(axis=1) - k) / (k * (k - 1))
    p_bar = float(p_i.mean())
    p_j = counts.sum(axis=0) / (n * k)
    p_e = float((p_j * p_j).sum())
    if p_e >= 1.0:
        # All mass in one category: observed agreement is necessarily perfect.
        return 1.0
    return (p_bar - p_e) / (1.0 - p_e)


@dataclass(frozen=True)
class AgreementReport:
    kappa: float | None
    n_items: int
    n_raters: int
    category_proportions: dict[str, float]

    def as_dict(self) -> dict:
        kappa = None if self.kappa is None else round(self.kappa, 6)
        return {
            "kappa": kappa,
            "n_items": self.n_items,
            "n_raters": self.n_raters,
            "category_proportions": {
                name: round(value, 6) for name, value in self.category_proportions.items()
            },
        }


def _label_table(
    labels_by_item: Mapping[str, Mapping[str, str]],
    annotators: Sequence[str],
) -> tuple[list[str], np.ndarray]:
    """Rows for items where every annotator gave a real (non-Skip) label."""
    column = {name: j for j, name in enumerate(CATEGORY_LABELS)}
    item_ids = []
    rows = []
    for item_id in sorted(labels_by_item):
        given = labels_by_item[item_id]
        if any(a not in given or given[a] == SKIP for a in annotators):
            continue
        row = [0] * len(CATEGORY_LABELS)
        for annotator in annotators:
            row[column[given[annotator]]] += 1
        item_ids.append(item_id)
        rows.append(row)
    return item_ids, np.asarray(rows, dtype=int).reshape(len(rows), len(CATEGORY_LABELS))


def agreement_from_events(
    labels_by_item: Mapping[str, Mapping[str, str]],
    annotators: Sequence[str],
) -> AgreementReport:
    """Kappa over the items that all ``annotators`` labeled with an intent.

    ``labels_by_item`` maps item id -> {annotator id -> label string}; Skip
    votes exclude the item.  With no usable items (or a single rater) kappa
    is None rather than a number.
    """
    annotators = list(annotators)
    _, table = _label_table(labels_by_item, annotators)
    if table.shape[0] == 0 or len(annotators) < 2:
        proportions = {name: 0.0 for name in CATEGORY_LABELS}
        return AgreementReport(None, table.shape[0], len(annotators), proportions)
    totals = table.sum(axis=0) / table.sum()
    proportions = {name: float(totals[j]) for j, name in enumerate(CATEGORY_LABELS)}
    return AgreementReport(fleiss_kappa(table), table.shape[0], len(annotators), proportions)


def consensus_labels(
    labels_by_item: Mapping[str, Mapping[str, str]],
) -> dict[str, str]:
    """Majority label per item, ignoring Skip votes; ties yield no consensus."""
    rank = {name: j for j, name in enumerate(CATEGORY_LABELS)}
    result: dict[str, str] = {}
    for item_id, given in labels_by_item.items():
        votes: dict[str, int] = {}
        for label in given.values():
            if label != SKIP:
                votes[label] = votes.get(label, 0) + 1
        if not votes:
            continue
        best = max(votes.values())
        winners = [name for name, count in votes.items() if count == best]
        if len(winners) == 1:
            result[item_id] = winners[0]
    return dict(sorted(result.items()))


def labels_from_pairs(pairs: Iterable[tuple[str, str, str]]) -> dict[str, dict[str, str]]:
    """Fold (item, annotator, label) triples into the nested mapping form."""
    out: dict[str, dict[str, str]] = {}
    for item_id, annotator, label in pairs:
        out.setdefault(item_id, {})[annotator] = label
    return out
