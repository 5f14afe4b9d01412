"""Synthetic query-log generator with planted per-intent ground truth.

Each generated query draws its text, clicks, dwell times, and ad impressions
from the behavior profile of its intent, so classifier and analytics stages
can be verified against the planted truth at desk scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from queryintent.analysis import IntentLabel
from queryintent.logs import ClickEvent, QueryRecord, write_records
from queryintent.weaklabel import ResourceLists

_BASE_TIME = datetime(2020, 1, 6, 9, 0, 0, tzinfo=timezone.utc)

_LABELS = tuple(label.value for label in IntentLabel)
_VALID_LABELS = frozenset(_LABELS)


@dataclass(frozen=True)
class IntentProfile:
    """Distribution parameters controlling one intent's generated behavior."""

    click_counts: tuple[tuple[int, float], ...]
    ads_rate: float
    success_rate: float
    category_rate: float
    background_range: tuple[int, int]
    max_domains: int
    echo_rate: float
    other_dwell: tuple[float, float]
    success_dwell: tuple[float, float] = (32.0, 150.0)
    fail_dwell: tuple[float, float] = (2.0, 29.0)
    snippet_range: tuple[int, int] = (6, 12)

    def mean_clicks(self) -> float:
        return sum(count * prob for count, prob in self.click_counts)

    def click_variance(self) -> float:
        mean = self.mean_clicks()
        return sum(prob * (count - mean) ** 2 for count, prob in self.click_counts)

    def validate(self, name: str) -> None:
        total = sum(prob for _, prob in self.click_counts)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"{name}: click_counts probabilities must sum to 1")
        if any(count < 0 or prob < 0 for count, prob in self.click_counts):
            raise ValueError(f"{name}: click_counts entries must be non-negative")
        for rate_name in ("ads_rate", "success_rate", "category_rate", "echo_rate"):
            rate = getattr(self, rate_name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name}: {rate_name} must be in [0, 1]")
        for range_name in ("background_range", "snippet_range"):
            low, high = getattr(self, range_name)
            if low < 0 or high < low:
                raise ValueError(f"{name}: {range_name} must be a valid range")
        for range_name in ("other_dwell", "success_dwell", "fail_dwell"):
            low, high = getattr(self, range_name)
            if low < 0 or high < low:
                raise ValueError(f"{name}: {range_name} must be a valid range")
        if self.max_domains < 1:
            raise ValueError(f"{name}: max_domains must be >= 1")


# Qualitative shape: Transactional mostly single-click; Navigational short
# with at most two domains; Support wordy with clicks echoing the query;
# Comparison the most clicks, domains, and total dwell.
DEFAULT_PROFILES: dict[str, IntentProfile] = {
    "Transactional": IntentProfile(
        click_counts=((1, 0.85), (2, 0.15)),
        ads_rate=0.90,
        success_rate=0.78,
        category_rate=0.50,
        background_range=(0, 2),
        max_domains=2,
        echo_rate=0.30,
        other_dwell=(10.0, 50.0),
    ),
    "Navigational": IntentProfile(
        click_counts=((1, 0.70), (2, 0.30)),
        ads_rate=0.85,
        success_rate=0.70,
        category_rate=0.35,
        background_range=(0, 1),
        max_domains=2,
        echo_rate=0.20,
        other_dwell=(10.0, 50.0),
        snippet_range=(4, 8),
    ),
    "Informational": IntentProfile(
        click_counts=((2, 0.50), (3, 0.50)),
        ads_rate=0.88,
        success_rate=0.55,
        category_rate=0.50,
        background_range=(1, 3),
        max_domains=3,
        echo_rate=0.40,
        other_dwell=(15.0, 60.0),
        snippet_range=(8, 16),
    ),
    "Support": IntentProfile(
        click_counts=((1, 0.35), (2, 0.40), (3, 0.25)),
        ads_rate=0.86,
        success_rate=0.45,
        category_rate=0.45,
        background_range=(2, 4),
        max_domains=3,
        echo_rate=0.90,
        other_dwell=(25.0, 75.0),
        snippet_range=(8, 16),
    ),
    "Comparison": IntentProfile(
        click_counts=((3, 0.40), (4, 0.35), (5, 0.25)),
        ads_rate=0.90,
        success_rate=0.62,
        category_rate=0.55,
        background_range=(1, 2),
        max_domains=5,
        echo_rate=0.40,
        other_dwell=(20.0, 80.0),
        success_dwell=(40.0, 170.0),
    ),
    "NotProduct": IntentProfile(
        click_counts=((0, 0.15), (1, 0.35), (2, 0.30), (3, 0.20)),
        ads_rate=0.004,
        success_rate=0.50,
        category_rate=0.0,
        background_range=(1, 3),
        max_domains=3,
        echo_rate=0.30,
        other_dwell=(5.0, 45.0),
    ),
}

# Product share echoes an annotation-set composition with NotProduct as the
# largest class and Transactional leading the product intents.
DEFAULT_INTENT_MIX: dict[str, float] = {
    "Transactional": 0.16,
    "Informational": 0.12,
    "Navigational": 0.07,
    "Support": 0.04,
    "Comparison": 0.035,
    "NotProduct": 0.575,
}

_BRANDS = (
    "sony", "samsung", "dell", "lenovo", "asus", "acer", "canon", "nikon",
    "bose", "garmin", "dyson", "makita", "lego", "nintendo", "fitbit",
    "kindle", "roomba", "gopro", "weber", "schwinn", "yeti", "timex",
    "casio", "breville", "coleman",
)

_NOUNS = (
    "laptop", "camera", "headphones", "blender", "drill", "vacuum", "tent",
    "watch", "sneakers", "backpack", "printer", "monitor", "keyboard",
    "router", "grill", "bike", "jacket", "stroller", "cookware", "mattress",
)

_PRE_MARKERS: dict[str, tuple[tuple[str, ...], ...]] = {
    "Transactional": (("buy",), ("order",), ("cheap",), ("purchase",)),
    "Informational": (("what", "is"), ("about",)),
    "Navigational": (),
    "Support": (("fix",), ("repair",), ("reset",), ("troubleshoot",)),
    "Comparison": (("best",), ("top",), ("compare",), ("cheapest",)),
}

_POST_MARKERS: dict[str, tuple[tuple[str, ...], ...]] = {
    "Transactional": (
        ("price",), ("deal",), ("coupon",), ("for", "sale"), ("discount",),
        ("in", "stock"), ("shop",),
    ),
    "Informational": (
        ("review",), ("reviews",), ("specs",), ("features",), ("guide",),
        ("release", "date"), ("explained",),
    ),
    "Navigational": (
        ("website",), ("official", "site"), ("login",), ("homepage",),
        ("store", "locator"),
    ),
    "Support": (
        ("not", "working"), ("error",), ("manual",), ("warranty",),
        ("help",), ("wont", "turn", "on"), ("problem",),
    ),
    "Comparison": (("alternatives",), ("comparison",), ("ranked",)),
}

_PRE_RATE = {
    "Transactional": 0.55,
    "Informational": 0.45,
    "Navigational": 0.0,
    "Support": 0.60,
    "Comparison": 0.80,
}
_POST_RATE = {
    "Transactional": 0.75,
    "Informational": 0.80,
    "Navigational": 0.65,
    "Support": 0.85,
    "Comparison": 0.45,
}

# None of these token runs may equal a bundled category or product entry;
# a unit test re-checks that so heuristic-precision math stays valid.
_NOT_PRODUCT_POOLS: dict[str, tuple[str, ...]] = {
    "weather": (
        "weather", "forecast", "temperature", "rain", "snow", "storm",
        "humidity", "radar",
    ),
    "news": (
        "news", "headlines", "election", "senate", "mayor", "council",
        "debate", "poll",
    ),
    "recipes": (
        "recipe", "bake", "pasta", "soup", "lasagna", "pancakes", "dough",
        "marinade", "roast",
    ),
    "sport": (
        "score", "schedule", "playoffs", "standings", "league", "tournament",
        "roster", "highlights",
    ),
    "wellness": (
        "symptoms", "flu", "headache", "doctor", "clinic", "vaccine",
        "allergy", "remedies",
    ),
    "civic": (
        "dmv", "passport", "renewal", "library", "county", "permit",
        "ballot", "jury",
    ),
    "pastimes": (
        "lyrics", "horoscope", "crossword", "sudoku", "trivia", "chords",
    ),
}

_NOT_PRODUCT_CITIES = (
    "seattle", "denver", "boston", "austin", "chicago", "miami", "portland",
    "phoenix",
)

_NOT_PRODUCT_MARKERS = (("best",), ("how", "to"), ("free",), ("near", "me"))

_BACKGROUND = (
    "the", "a", "for", "my", "in", "on", "near", "me", "new", "now",
    "today", "this", "with", "and",
)

_STORE_DOMAINS = ("amazon", "bestbuy", "ebay", "walmart", "target", "newegg")
_REVIEW_DOMAINS = ("cnet", "wirecutter", "rtings", "techradar", "tomsguide")
_FORUM_DOMAINS = ("reddit", "quora")
_NOT_PRODUCT_DOMAINS = (
    "wikipedia", "accuweather", "espn", "allrecipes", "webmd", "nytimes",
    "citygov", "puzzlehub",
)

_SNIPPET_FILLER = (
    "results", "learn", "more", "find", "read", "details", "page", "see",
    "get", "your", "from", "our",
)


@dataclass(frozen=True)
class GeneratorConfig:
    """Validated knobs for one generation run."""

    n_sessions: int = 1000
    seed: int = 0
    intent_mix: Mapping[str, float] = field(
        default_factory=lambda: dict(DEFAULT_INTENT_MIX)
    )
    n_queries: int | None = None
    session_lengths: tuple[tuple[int, float], ...] = (
        (1, 0.30), (2, 0.30), (3, 0.25), (4, 0.15),
    )
    profiles: Mapping[str, IntentProfile] = field(
        default_factory=lambda: dict(DEFAULT_PROFILES)
    )

    def __post_init__(self):
        if self.n_sessions < 1:
            raise ValueError("n_sessions must be >= 1")
        if self.n_queries is not None and self.n_queries < 1:
            raise ValueError("n_queries must be >= 1 when given")
        for name in self.intent_mix:
            if name not in _VALID_LABELS:
                raise ValueError(f"unknown intent in mix: {name!r}")
        if any(prob < 0 for prob in self.intent_mix.values()):
            raise ValueError("intent_mix probabilities must be non-negative")
        total = sum(self.intent_mix.values())
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"intent_mix must sum to 1 (got {total:.6f})")
        lengths_total = sum(prob for _, prob in self.session_lengths)
        if abs(lengths_total - 1.0) > 1e-9:
            raise ValueError("session_lengths probabilities must sum to 1")
        if any(length < 1 for length, _ in self.session_lengths):
            raise ValueError("session lengths must be >= 1")
        for name in self.profiles:
            if name not in _VALID_LABELS:
                raise ValueError(f"unknown intent in profiles: {name!r}")
        missing = [name for name in _LABELS if name not in self.profiles]
        if missing:
            raise ValueError(f"missing profile for intent: {missing[0]}")
        for name, profile in self.profiles.items():
            profile.validate(name)

    @staticmethod
    def from_dict(data: Mapping) -> "GeneratorConfig":
        known = {"n_sessions", "seed", "intent_mix", "n_queries", "ads_rates"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown generator config key: {sorted(unknown)[0]!r}")
        kwargs: dict = {}
        if "n_sessions" in data:
            kwargs["n_sessions"] = int(data["n_sessions"])
        if "seed" in data:
            kwargs["seed"] = int(data["seed"])
        if "n_queries" in data and data["n_queries"] is not None:
            kwargs["n_queries"] = int(data["n_queries"])
        if "intent_mix" in data:
            kwargs["intent_mix"] = {
                str(k): float(v) for k, v in dict(data["intent_mix"]).items()
            }
        profiles = dict(DEFAULT_PROFILES)
        for name, rate in dict(data.get("ads_rates", {})).items():
            if name not in profiles:
                raise ValueError(f"unknown intent in ads_rates: {name!r}")
            profiles[name] = replace(profiles[name], ads_rate=float(rate))
        kwargs["profiles"] = profiles
        return GeneratorConfig(**kwargs)

    @staticmethod
    def load(path: str | Path) -> "GeneratorConfig":
        return GeneratorConfig.from_dict(json.loads(Path(path).read_text("utf-8")))


def _draw(rng: np.random.Generator, pairs: Sequence[tuple[int, float]]) -> int:
    values = [value for value, _ in pairs]
    probs = np.asarray([prob for _, prob in pairs], dtype=float)
    return int(values[int(rng.choice(len(values), p=probs / probs.sum()))])


def _pick(rng: np.random.Generator, pool: Sequence) -> object:
    return pool[int(rng.integers(0, len(pool)))]


def _entities(resources: ResourceLists) -> list[tuple[str, ...]]:
    pairs = []
    for i, brand in enumerate(_BRANDS):
        for j in (i % len(_NOUNS), (i + 7) % len(_NOUNS), (i + 13) % len(_NOUNS)):
            pairs.append((brand, _NOUNS[j]))
    return pairs + [tuple(entry) for entry in resources._product_tokens]


class _Generator:
    def __init__(self, config: GeneratorConfig, resources: ResourceLists):
        self.config = config
        self.rng = np.random.default_rng(config.seed)
        self.entities = _entities(resources)
        self.categories = [tuple(entry) for entry in resources._category_tokens]
        self.pool_names = sorted(_NOT_PRODUCT_POOLS)
        self.intent_names = list(_LABELS)
        self.intent_probs = np.asarray(
            [float(config.intent_mix.get(name, 0.0)) for name in self.intent_names]
        )
        self.intent_probs = self.intent_probs / self.intent_probs.sum()

    def _uniform(self, low: float, high: float) -> float:
        return round(float(self.rng.uniform(low, high)), 1)

    def _entity(self) -> tuple[str, ...]:
        return tuple(_pick(self.rng, self.entities))

    def _markers(self, intent: str) -> tuple[list[str], list[str]]:
        rng = self.rng
        pre: list[str] = []
        post: list[str] = []
        pre_pool = _PRE_MARKERS[intent]
        post_pool = _POST_MARKERS[intent]
        if pre_pool and rng.random() < _PRE_RATE[intent]:
            pre = list(_pick(rng, pre_pool))
        if post_pool and rng.random() < _POST_RATE[intent]:
            post = list(_pick(rng, post_pool))
        if not pre and not post and intent != "Navigational":
            post = list(_pick(rng, post_pool or pre_pool))
        return pre, post

    def _background(self, profile: IntentProfile) -> list[str]:
        low, high = profile.background_range
        count = int(self.rng.integers(low, high + 1))
        return [str(_pick(self.rng, _BACKGROUND)) for _ in range(count)]

    def _product_words(self, intent: str, profile: IntentProfile) -> tuple[list[str], tuple[str, ...]]:
        entity = self._entity()
        pre, post = self._markers(intent)
        words = pre + list(entity) + post
        if intent == "Comparison" and self.rng.random() < 0.5:
            rival = self._entity()
            words += [str(_pick(self.rng, ("vs", "versus", "or")))] + list(rival)
        if self.rng.random() < profile.category_rate:
            entry = list(_pick(self.rng, self.categories))
            at = int(self.rng.integers(0, len(words) + 1))
            words = words[:at] + entry + words[at:]
        words += self._background(profile)
        return words, entity

    def _not_product_words(self, profile: IntentProfile) -> tuple[list[str], tuple[str, ...]]:
        rng = self.rng
        pool_name = str(_pick(rng, self.pool_names))
        pool = _NOT_PRODUCT_POOLS[pool_name]
        count = int(rng.integers(2, 5))
        picks = [str(pool[int(i)]) for i in rng.choice(len(pool), size=min(count, len(pool)), replace=False)]
        words = list(picks)
        if pool_name in ("weather", "news", "civic") and rng.random() < 0.6:
            words.append(str(_pick(rng, _NOT_PRODUCT_CITIES)))
        if rng.random() < 0.15:
            words = list(_pick(rng, _NOT_PRODUCT_MARKERS)) + words
        words += self._background(profile)
        return words, tuple(picks[:2])

    def _domains(self, intent: str, entity: tuple[str, ...], count: int) -> list[str]:
        rng = self.rng
        brand = entity[0]
        if intent == "Navigational":
            # Heavily weighted toward the brand's own site.
            pool = [brand, brand, brand, str(_pick(rng, _STORE_DOMAINS))]
            return [str(_pick(rng, pool)) for _ in range(count)]
        if intent == "Support":
            pool = [f"support.{brand}", brand, *_FORUM_DOMAINS]
        elif intent == "Informational":
            pool = list(_REVIEW_DOMAINS) + list(_FORUM_DOMAINS)
        elif intent == "Comparison":
            pool = list(_STORE_DOMAINS) + list(_REVIEW_DOMAINS)
        elif intent == "Transactional":
            pool = list(_STORE_DOMAINS)
        else:
            pool = list(_NOT_PRODUCT_DOMAINS)
        if intent == "Comparison":
            order = rng.permutation(len(pool))
            return [pool[int(order[i % len(pool)])] for i in range(count)]
        return [str(_pick(rng, pool)) for _ in range(count)]

    def _path_words(self, profile: IntentProfile, words: list[str], entity: tuple[str, ...]) -> list[str]:
        rng = self.rng
        if words and rng.random() < profile.echo_rate:
            take = min(len(words), int(rng.integers(2, 4)))
            order = rng.permutation(len(words))
            return [words[int(order[i])] for i in range(take)]
        return list(entity)

    def _clicks(
        self,
        intent: str,
        profile: IntentProfile,
        words: list[str],
        entity: tuple[str, ...],
    ) -> tuple[ClickEvent, ...]:
        rng = self.rng
        count = _draw(rng, profile.click_counts)
        if count == 0:
            return ()
        domains = self._domains(intent, entity, count)
        if len(set(domains)) > profile.max_domains:
            domains = [domains[i % profile.max_domains] for i in range(count)]
        successful = rng.random() < profile.success_rate
        clicks = []
        for order in range(1, count + 1):
            path = "-".join(self._path_words(profile, words, entity))
            if rng.random() < 0.3:
                path += f"/{int(rng.integers(100, 999))}"
            url = f"https://www.{domains[order - 1]}.com/{path}"
            if order == count:
                low, high = (
                    profile.success_dwell if successful else profile.fail_dwell
                )
            else:
                low, high = profile.other_dwell
            snippet_low, snippet_high = profile.snippet_range
            length = int(rng.integers(snippet_low, snippet_high + 1))
            snippet_pool = list(entity) + list(_SNIPPET_FILLER) + words[:3]
            snippet = " ".join(
                str(_pick(rng, snippet_pool)) for _ in range(length)
            )
            clicks.append(
                ClickEvent(
                    url=url,
                    snippet=snippet,
                    dwell_seconds=self._uniform(low, high),
                    order=order,
                )
            )
        return tuple(clicks)

    def _record(
        self, query_id: str, session_id: str, when: datetime, intent: str
    ) -> QueryRecord:
        profile = self.config.profiles[intent]
        if intent == "NotProduct":
            words, entity = self._not_product_words(profile)
        else:
            words, entity = self._product_words(intent, profile)
        clicks = self._clicks(intent, profile, words, entity)
        if self.rng.random() < profile.ads_rate:
            ads_shown = int(self.rng.integers(1, 4))
        else:
            ads_shown = 0
        return QueryRecord(
            query_id=query_id,
            session_id=session_id,
            timestamp=when,
            query=" ".join(words),
            ads_shown=ads_shown,
            clicks=clicks,
        )

    def run(self) -> tuple[list[QueryRecord], dict[str, str]]:
        config = self.config
        records: list[QueryRecord] = []
        truth: dict[str, str] = {}
        query_index = 0
        session_index = 0
        while True:
            if config.n_queries is None and session_index >= config.n_sessions:
                break
            if config.n_queries is not None and query_index >= config.n_queries:
                break
            session_id = f"s{session_index:05d}"
            length = _draw(self.rng, config.session_lengths)
            if config.n_queries is not None:
                length = min(length, config.n_queries - query_index)
            when = _BASE_TIME + timedelta(seconds=180 * session_index)
            for _ in range(length):
                when = when + timedelta(seconds=int(self.rng.integers(15, 91)))
                intent = self.intent_names[
                    int(self.rng.choice(len(self.intent_names), p=self.intent_probs))
                ]
                query_id = f"q{query_index:06d}"
                records.append(self._record(query_id, session_id, when, intent))
                truth[query_id] = intent
                query_index += 1
            session_index += 1
        return records, truth


def generate(
    config: GeneratorConfig, resources: ResourceLists | None = None
) -> tuple[list[QueryRecord], dict[str, str]]:
    """Produce records plus an exhaustive query_id -> intent truth map."""
    if resources is None:
        resources = ResourceLists.bundled()
    return _Generator(config, resources).run()


def write_truth(path: str | Path, truth: Mapping[str, str]) -> None:
    lines = [f"{query_id}\t{label}" for query_id, label in truth.items()]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), "utf-8")


def load_truth(path: str | Path) -> dict[str, str]:
    truth: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2 or parts[1] not in _VALID_LABELS:
            raise ValueError(f"{Path(path).name}:{lineno}: expected 'query_id<TAB>intent'")
        truth[parts[0]] = parts[1]
    return truth


def generate_files(
    config: GeneratorConfig,
    log_path: str | Path,
    truth_path: str | Path,
    resources: ResourceLists | None = None,
) -> int:
    records, truth = generate(config, resources)
    write_records(records, log_path)
    write_truth(truth_path, truth)
    return len(records)
