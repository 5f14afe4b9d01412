"""Distant-supervision heuristics for product queries and their evaluation.

Four labeling heuristics: product ads shown, category-name match, their
disjunction, and a best-seller product list. Matching is token-based; a
multi-word list entry must appear as a contiguous token run in the query or
in a clicked url's host+path, which avoids substring false positives such as
"art" inside "cart".
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from importlib import resources as importlib_resources
from pathlib import Path
from typing import Iterable, Sequence

from queryintent._validation import check_random_state
from queryintent.logs import QueryRecord
from queryintent.text.urls import url_words
from queryintent.text.wordpiece import normalize_words


class HeuristicKind(str, enum.Enum):
    PRODUCT_LIST = "ProductList"
    PRODUCT_ADS = "ProductAds"
    PRODUCT_CATEGORIES = "ProductCategories"
    ADS_AND_CATEGORIES = "AdsAndCategories"


def _normalize_entries(entries: Iterable[str]) -> list[str]:
    seen = []
    for entry in entries:
        entry = " ".join(normalize_words(entry))
        if entry and entry not in seen:
            seen.append(entry)
    return seen


@dataclass
class ResourceLists:
    """Lowercased, deduplicated category and best-seller product name lists."""

    categories: list[str]
    products: list[str]

    def __post_init__(self):
        self.categories = _normalize_entries(self.categories)
        self.products = _normalize_entries(self.products)
        self._category_tokens = [tuple(c.split()) for c in self.categories]
        self._product_tokens = [tuple(p.split()) for p in self.products]

    @staticmethod
    def _read_list(path) -> list[str]:
        out = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(line)
        return out

    @classmethod
    def load(cls, categories_path, products_path) -> "ResourceLists":
        return cls(cls._read_list(categories_path), cls._read_list(products_path))

    @classmethod
    def bundled(cls) -> "ResourceLists":
        pkg = importlib_resources.files("queryintent.resources")
        return cls(
            cls._read_list(pkg / "product_categories.txt"),
            cls._read_list(pkg / "top_products.txt"),
        )


def _contains_run(tokens: Sequence[str], entry: tuple[str, ...]) -> bool:
    n = len(entry)
    if n == 0 or n > len(tokens):
        return False
    for i in range(len(tokens) - n + 1):
        if tuple(tokens[i : i + n]) == entry:
            return True
    return False


def _record_token_views(record: QueryRecord) -> list[list[str]]:
    views = [normalize_words(record.query)]
    for click in record.clicks:
        views.append(url_words(click.url, include_domain=True))
    return views


def _matches_any(record: QueryRecord, entries: list[tuple[str, ...]]) -> bool:
    views = _record_token_views(record)
    return any(_contains_run(view, entry) for view in views for entry in entries)


def apply_heuristic(record: QueryRecord, kind: HeuristicKind, res: ResourceLists) -> bool:
    """True when the record satisfies the given distant-supervision heuristic."""
    if kind is HeuristicKind.PRODUCT_ADS:
        return record.ads_shown >= 1
    if kind is HeuristicKind.PRODUCT_CATEGORIES:
        return _matches_any(record, res._category_tokens)
    if kind is HeuristicKind.PRODUCT_LIST:
        return _matches_any(record, res._product_tokens)
    if kind is HeuristicKind.ADS_AND_CATEGORIES:
        return record.ads_shown >= 1 or _matches_any(record, res._category_tokens)
    raise ValueError(f"unknown heuristic {kind!r}")


@dataclass
class WeakLabeledSet:
    """Balanced weakly-labeled query ids sampled by one heuristic."""

    positives: list[str]
    negatives: list[str]
    heuristic: HeuristicKind
    seed: int

    def __post_init__(self):
        overlap = set(self.positives) & set(self.negatives)
        if overlap:
            raise ValueError(f"positives and negatives overlap: {sorted(overlap)[:3]}")

    def save(self, path) -> None:
        payload = {
            "heuristic": self.heuristic.value,
            "seed": self.seed,
            "positives": self.positives,
            "negatives": self.negatives,
        }
        Path(path).write_text(json.dumps(payload, indent=1), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "WeakLabeledSet":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            positives=payload["positives"],
            negatives=payload["negatives"],
            heuristic=HeuristicKind(payload["heuristic"]),
            seed=payload["seed"],
        )


def build_weak_set(
    records: Sequence[QueryRecord],
    kind: HeuristicKind,
    res: ResourceLists,
    n_pos: int,
    n_neg: int,
    seed: int,
) -> WeakLabeledSet:
    """Sample n_pos satisfying and n_neg non-satisfying query ids, without replacement."""
    pos_ids = [r.query_id for r in records if apply_heuristic(r, kind, res)]
    neg_ids = [r.query_id for r in records if not apply_heuristic(r, kind, res)]
    if n_pos > len(pos_ids):
        raise ValueError(f"positives exhausted ({len(pos_ids)} available)")
    if n_neg > len(neg_ids):
        raise ValueError(f"negatives exhausted ({len(neg_ids)} available)")
    rng = check_random_state(seed)
    positives = [pos_ids[i] for i in rng.choice(len(pos_ids), size=n_pos, replace=False)]
    negatives = [neg_ids[i] for i in rng.choice(len(neg_ids), size=n_neg, replace=False)]
    return WeakLabeledSet(positives=positives, negatives=negatives, heuristic=kind, seed=seed)


@dataclass
class HeuristicMetrics:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    @property
    def accuracy(self) -> float:
        total = self.tp + self.fp + self.fn + self.tn
        return (self.tp + self.tn) / total if total else 0.0

    def as_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "tn": self.tn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "accuracy": self.accuracy,
        }


def evaluate_heuristics(
    gold: Sequence[tuple[QueryRecord, bool]],
    res: ResourceLists,
) -> dict[HeuristicKind, HeuristicMetrics]:
    """Confusion-count evaluation of all four heuristics against gold product labels."""
    if not gold:
        raise ValueError("gold set is empty")
    out = {}
    for kind in HeuristicKind:
        tp = fp = fn = tn = 0
        for record, is_product in gold:
            fired = apply_heuristic(record, kind, res)
            if fired and is_product:
                tp += 1
            elif fired and not is_product:
                fp += 1
            elif not fired and is_product:
                fn += 1
            else:
                tn += 1
        out[kind] = HeuristicMetrics(tp=tp, fp=fp, fn=fn, tn=tn)
    return out
