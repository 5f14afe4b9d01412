"""Durable label storage and the serving queue for annotation sessions."""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from queryintent.annotation.agreement import LABEL_CHOICES
from queryintent.logs import QueryRecord

STATUS_PENDING = "pending"
STATUS_PARTIAL = "partially_labeled"
STATUS_COMPLETE = "complete"


@dataclass(frozen=True)
class LabelEvent:
    query_id: str
    annotator_id: str
    label: str
    timestamp: float

    def to_dict(self) -> dict:
        return {
            "query_id": self.query_id,
            "annotator_id": self.annotator_id,
            "label": self.label,
            "timestamp": self.timestamp,
        }

    @staticmethod
    def from_dict(data: Mapping) -> "LabelEvent":
        for key in ("query_id", "annotator_id", "label", "timestamp"):
            if key not in data:
                raise ValueError(f"label event missing field: {key}")
        label = data["label"]
        if label not in LABEL_CHOICES:
            raise ValueError(f"unknown label: {label!r}")
        return LabelEvent(
            query_id=str(data["query_id"]),
            annotator_id=str(data["annotator_id"]),
            label=label,
            timestamp=float(data["timestamp"]),
        )


class LabelStore:
    """Append-only JSONL event log; the latest event per (item, annotator) wins.

    Every append is flushed and fsynced before returning, so an acknowledged
    label survives an immediate crash.  Readers see the folded live state.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._live: dict[str, dict[str, str]] = {}
        self._count = 0
        if self.path.exists():
            self._replay()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.touch()

    def _replay(self) -> None:
        with self.path.open("r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    event = LabelEvent.from_dict(json.loads(line))
                except (json.JSONDecodeError, ValueError) as exc:
                    raise ValueError(f"{self.path.name}:{lineno}: {exc}") from exc
                self._apply(event)

    def _apply(self, event: LabelEvent) -> None:
        self._live.setdefault(event.query_id, {})[event.annotator_id] = event.label
        self._count += 1

    def append(self, event: LabelEvent) -> None:
        if event.label not in LABEL_CHOICES:
            raise ValueError(f"unknown label: {event.label!r}")
        line = json.dumps(event.to_dict(), sort_keys=True, separators=(",", ":"))
        with self._lock:
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()
                os.fsync(handle.fileno())
            self._apply(event)

    def record_label(self, query_id: str, annotator_id: str, label: str) -> LabelEvent:
        event = LabelEvent(query_id, annotator_id, label, time.time())
        self.append(event)
        return event

    def labels_for(self, query_id: str) -> dict[str, str]:
        with self._lock:
            return dict(self._live.get(query_id, {}))

    def labels_by_item(self) -> dict[str, dict[str, str]]:
        with self._lock:
            return {item: dict(given) for item, given in self._live.items()}

    def event_count(self) -> int:
        with self._lock:
            return self._count


@dataclass(frozen=True)
class AnnotationItem:
    query_id: str
    topic: int
    query: str
    clicks: tuple[dict, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "query_id": self.query_id,
            "topic": self.topic,
            "query": self.query,
            "clicks": list(self.clicks),
        }


def item_from_record(record: QueryRecord, topic: int) -> AnnotationItem:
    clicks = tuple(
        {"url": click.url, "snippet": click.snippet} for click in record.clicks
    )
    return AnnotationItem(record.query_id, topic, record.query, clicks)


class AnnotationQueue:
    """Serves sampled items to a fixed roster of annotators.

    Items are handed out in (topic, query_id) order; each annotator walks the
    same sequence independently and only sees items they have not yet labeled.
    """

    def __init__(
        self,
        items: Sequence[AnnotationItem],
        annotators: Sequence[str],
        store: LabelStore,
    ):
        if not annotators:
            raise ValueError("need at least one annotator")
        seen = set()
        for item in items:
            if item.query_id in seen:
                raise ValueError(f"duplicate item: {item.query_id}")
            seen.add(item.query_id)
        self.items = sorted(items, key=lambda item: (item.topic, item.query_id))
        self.annotators = list(dict.fromkeys(annotators))
        self.store = store
        self._by_id = {item.query_id: item for item in self.items}

    def get_item(self, query_id: str) -> AnnotationItem:
        if query_id not in self._by_id:
            raise KeyError(f"unknown item: {query_id}")
        return self._by_id[query_id]

    def _check_annotator(self, annotator_id: str) -> None:
        if annotator_id not in self.annotators:
            raise KeyError(f"unknown annotator: {annotator_id}")

    def next_item(self, annotator_id: str) -> AnnotationItem | None:
        self._check_annotator(annotator_id)
        for item in self.items:
            if annotator_id not in self.store.labels_for(item.query_id):
                return item
        return None

    def submit(self, annotator_id: str, query_id: str, label: str) -> LabelEvent:
        self._check_annotator(annotator_id)
        item = self.get_item(query_id)
        if label not in LABEL_CHOICES:
            raise ValueError(f"unknown label: {label!r}")
        return self.store.record_label(item.query_id, annotator_id, label)

    def item_status(self, query_id: str) -> str:
        labels = self.store.labels_for(self.get_item(query_id).query_id)
        done = sum(1 for annotator in self.annotators if annotator in labels)
        if done == 0:
            return STATUS_PENDING
        if done < len(self.annotators):
            return STATUS_PARTIAL
        return STATUS_COMPLETE

    def progress(self) -> dict:
        statuses = {STATUS_PENDING: 0, STATUS_PARTIAL: 0, STATUS_COMPLETE: 0}
        for item in self.items:
            statuses[self.item_status(item.query_id)] += 1
        per_annotator = {}
        for annotator in self.annotators:
            labeled = sum(
                1
                for item in self.items
                if annotator in self.store.labels_for(item.query_id)
            )
            per_annotator[annotator] = {"labeled": labeled, "total": len(self.items)}
        return {
            "n_items": len(self.items),
            "statuses": statuses,
            "annotators": per_annotator,
        }


def load_sample(path: str | Path) -> list[tuple[str, int]]:
    """Read a sampled-items file of "query_id<TAB>topic" lines."""
    pairs = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{Path(path).name}:{lineno}: expected 'query_id<TAB>topic'")
        pairs.append((parts[0], int(parts[1])))
    return pairs


def save_sample(path: str | Path, pairs: Sequence[tuple[str, int]]) -> None:
    lines = [f"{query_id}\t{topic}" for query_id, topic in pairs]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
