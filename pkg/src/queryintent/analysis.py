"""Session-level intent metrics: success rate, popularity, effort, co-occurrence.

All metrics cover the five product intents only; NotProduct records are
excluded everywhere. A search is successful when the dwell on its last
clicked url is strictly more than 30 seconds; a query with no clicks is
unsuccessful.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from queryintent.logs import QueryRecord, Session

SUCCESS_DWELL_SECONDS = 30.0


class IntentLabel(str, enum.Enum):
    COMPARISON = "Comparison"
    INFORMATIONAL = "Informational"
    NAVIGATIONAL = "Navigational"
    SUPPORT = "Support"
    TRANSACTIONAL = "Transactional"
    NOT_PRODUCT = "NotProduct"


PRODUCT_INTENTS: tuple[IntentLabel, ...] = (
    IntentLabel.COMPARISON,
    IntentLabel.INFORMATIONAL,
    IntentLabel.NAVIGATIONAL,
    IntentLabel.SUPPORT,
    IntentLabel.TRANSACTIONAL,
)

_INTENT_INDEX = {intent: i for i, intent in enumerate(PRODUCT_INTENTS)}

LabeledRecord = tuple[QueryRecord, IntentLabel]


def is_successful(record: QueryRecord) -> bool:
    last = record.last_click
    return last is not None and last.dwell_seconds > SUCCESS_DWELL_SECONDS


def success_rate(labeled: Iterable[LabeledRecord]) -> dict[IntentLabel, float]:
    """Percent of records per intent whose last click dwelled > 30 s."""
    hits: dict[IntentLabel, int] = {}
    totals: dict[IntentLabel, int] = {}
    for record, label in labeled:
        if label not in _INTENT_INDEX:
            continue
        totals[label] = totals.get(label, 0) + 1
        if is_successful(record):
            hits[label] = hits.get(label, 0) + 1
    return {label: 100.0 * hits.get(label, 0) / n for label, n in totals.items()}


def popularity(labels: Iterable[IntentLabel]) -> dict[IntentLabel, float]:
    """Percent share of each product intent among all product-intent labels."""
    counts: dict[IntentLabel, int] = {}
    for label in labels:
        if label in _INTENT_INDEX:
            counts[label] = counts.get(label, 0) + 1
    total = sum(counts.values())
    if total == 0:
        raise ValueError("no product-intent labels")
    return {label: 100.0 * n / total for label, n in counts.items()}


def effort(labeled: Iterable[LabeledRecord]) -> dict[IntentLabel, float]:
    """Mean total dwell per intent, scaled so Comparison equals 1."""
    dwell_sums: dict[IntentLabel, float] = {}
    counts: dict[IntentLabel, int] = {}
    for record, label in labeled:
        if label not in _INTENT_INDEX:
            continue
        dwell_sums[label] = dwell_sums.get(label, 0.0) + record.total_dwell
        counts[label] = counts.get(label, 0) + 1
    baseline_n = counts.get(IntentLabel.COMPARISON, 0)
    baseline = dwell_sums.get(IntentLabel.COMPARISON, 0.0) / baseline_n if baseline_n else 0.0
    if baseline <= 0:
        raise ValueError("no comparison baseline")
    return {label: (dwell_sums[label] / counts[label]) / baseline for label in counts}


def cooccurrence(labeled_sessions: Sequence[Sequence[IntentLabel]]) -> np.ndarray:
    """5x5 percent matrix: row intent preceded (anywhere earlier in-session)
    by column intent; NotProduct drops out entirely."""
    with_pred = np.zeros((5, 5), dtype=np.int64)
    subject_counts = np.zeros(5, dtype=np.int64)
    for session_labels in labeled_sessions:
        seq = [l for l in session_labels if l in _INTENT_INDEX]
        seen: set[IntentLabel] = set()
        for label in seq:
            a = _INTENT_INDEX[label]
            subject_counts[a] += 1
            for pred in seen:
                with_pred[a, _INTENT_INDEX[pred]] += 1
            seen.add(label)
    matrix = np.zeros((5, 5))
    nonzero = subject_counts > 0
    matrix[nonzero] = 100.0 * with_pred[nonzero] / subject_counts[nonzero, None]
    return matrix


@dataclass
class MetricsReport:
    """The four intent metrics plus per-intent query counts."""

    success_rate: dict[IntentLabel, float]
    popularity: dict[IntentLabel, float]
    effort: dict[IntentLabel, float]
    cooccurrence: np.ndarray
    counts: dict[IntentLabel, int]

    def as_dict(self) -> dict:
        return {
            "counts": {k.value: v for k, v in sorted(self.counts.items(), key=lambda kv: kv[0].value)},
            "success_rate": {k.value: round(v, 4) for k, v in sorted(self.success_rate.items(), key=lambda kv: kv[0].value)},
            "popularity": {k.value: round(v, 4) for k, v in sorted(self.popularity.items(), key=lambda kv: kv[0].value)},
            "effort": {k.value: round(v, 4) for k, v in sorted(self.effort.items(), key=lambda kv: kv[0].value)},
            "cooccurrence_order": [i.value for i in PRODUCT_INTENTS],
            "cooccurrence": [[round(v, 4) for v in row] for row in self.cooccurrence],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=1, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["Intent", "Success Rate", "Popularity", "Estimated Effort"])
        for intent in PRODUCT_INTENTS:
            if intent not in self.counts:
                continue
            writer.writerow(
                [
                    intent.value,
                    f"{self.success_rate.get(intent, 0.0):.2f}",
                    f"{self.popularity.get(intent, 0.0):.2f}",
                    f"{self.effort.get(intent, 0.0):.2f}",
                ]
            )
        writer.writerow([])
        writer.writerow(["Cooccurrence"] + [i.value for i in PRODUCT_INTENTS])
        for i, intent in enumerate(PRODUCT_INTENTS):
            writer.writerow([intent.value] + [f"{v:.2f}" for v in self.cooccurrence[i]])
        return buf.getvalue()


def label_sessions(
    sessions: Sequence[Session],
    labels: Mapping[str, IntentLabel],
) -> list[list[LabeledRecord]]:
    """Attach labels to session records, dropping records without a label."""
    out = []
    for session in sessions:
        pairs = [
            (r, IntentLabel(labels[r.query_id]))
            for r in session.records
            if r.query_id in labels
        ]
        if pairs:
            out.append(pairs)
    return out


def compute_metrics(labeled_sessions: Sequence[Sequence[LabeledRecord]]) -> MetricsReport:
    flat = [pair for session in labeled_sessions for pair in session]
    product = [(r, l) for r, l in flat if l in _INTENT_INDEX]
    counts: dict[IntentLabel, int] = {}
    for _, label in product:
        counts[label] = counts.get(label, 0) + 1
    return MetricsReport(
        success_rate=success_rate(flat),
        popularity=popularity(label for _, label in flat),
        effort=effort(flat),
        cooccurrence=cooccurrence([[l for _, l in session] for session in labeled_sessions]),
        counts=counts,
    )
