"""Distant-supervision heuristics, weak-set sampling, and gold evaluation."""

import pytest

from queryintent.weaklabel import (
    HeuristicKind,
    ResourceLists,
    WeakLabeledSet,
    apply_heuristic,
    build_weak_set,
    evaluate_heuristics,
)

from .conftest import make_click, make_record

RES = ResourceLists(categories=["books", "Video Games"], products=["iPad", "star wars"])


def clicked(url):
    return (make_click(url=url),)


def test_entries_normalized_lowercase_deduped():
    res = ResourceLists(categories=["Books", "books!", "toys"], products=[])
    assert res.categories == ["books", "toys"]


def test_list_files_allow_comments(tmp_path):
    cats = tmp_path / "c.txt"
    cats.write_text("# header\nbooks  # inline\n\nvideo games\n")
    prods = tmp_path / "p.txt"
    prods.write_text("ipad\n")
    res = ResourceLists.load(cats, prods)
    assert res.categories == ["books", "video games"]
    assert res.products == ["ipad"]


def test_bundled_lists_present():
    res = ResourceLists.bundled()
    assert "electronics" in res.categories
    assert len(res.products) == 10


def test_ads_heuristic_threshold():
    assert apply_heuristic(make_record(ads_shown=2), HeuristicKind.PRODUCT_ADS, RES)
    assert apply_heuristic(make_record(ads_shown=1), HeuristicKind.PRODUCT_ADS, RES)
    assert not apply_heuristic(make_record(ads_shown=0), HeuristicKind.PRODUCT_ADS, RES)


def test_category_matches_whole_token_run():
    assert apply_heuristic(
        make_record(query="best books 2019"), HeuristicKind.PRODUCT_CATEGORIES, RES
    )
    # substring of a token is not a match
    assert not apply_heuristic(
        make_record(query="bookshelf plans"), HeuristicKind.PRODUCT_CATEGORIES, RES
    )
    # multi-word entries must appear contiguously
    assert apply_heuristic(
        make_record(query="cheap video games sale"), HeuristicKind.PRODUCT_CATEGORIES, RES
    )
    assert not apply_heuristic(
        make_record(query="video of games"), HeuristicKind.PRODUCT_CATEGORIES, RES
    )


def test_category_matches_click_url_tokens():
    rec = make_record(
        query="switch deals",
        clicks=clicked("https://shop.com/video-games/switch"),
    )
    assert apply_heuristic(rec, HeuristicKind.PRODUCT_CATEGORIES, RES)


def test_product_list_matching():
    assert apply_heuristic(
        make_record(query="star wars lego"), HeuristicKind.PRODUCT_LIST, RES
    )
    assert not apply_heuristic(
        make_record(query="war of stars"), HeuristicKind.PRODUCT_LIST, RES
    )


def test_combination_is_disjunction():
    ads_only = make_record(ads_shown=1, query="weather now")
    cat_only = make_record(ads_shown=0, query="books for kids")
    neither = make_record(ads_shown=0, query="weather now")
    assert apply_heuristic(ads_only, HeuristicKind.ADS_AND_CATEGORIES, RES)
    assert apply_heuristic(cat_only, HeuristicKind.ADS_AND_CATEGORIES, RES)
    assert not apply_heuristic(neither, HeuristicKind.ADS_AND_CATEGORIES, RES)


# 40-record gold fixture: eight archetypes, five records each.  Confusion
# counts below were tallied by hand from the archetype table.
_ARCHETYPES = [
    # (gold_is_product, ads_shown, query, click url or None)
    (True, 2, "buy books online", None),
    (True, 1, "cheap ipad deals", None),
    (True, 0, "star wars lego set", None),
    (True, 0, "nintendo console", "https://shop.com/video-games/switch"),
    (True, 0, "wireless headphones review", "https://reviews.com/audio"),
    (False, 1, "weather tomorrow", None),
    (False, 0, "library hours downtown", "https://city.org/hours"),
    (False, 0, "comic books library", None),
]


def gold_fixture():
    gold = []
    i = 0
    for is_product, ads, query, url in _ARCHETYPES:
        for _ in range(5):
            rec = make_record(
                query_id=f"g{i:03d}",
                query=query,
                ads_shown=ads,
                clicks=clicked(url) if url else (),
            )
            gold.append((rec, is_product))
            i += 1
    return gold


EXPECTED_CONFUSIONS = {
    HeuristicKind.PRODUCT_ADS: (10, 5, 15, 10),
    HeuristicKind.PRODUCT_CATEGORIES: (10, 5, 15, 10),
    HeuristicKind.PRODUCT_LIST: (10, 0, 15, 15),
    HeuristicKind.ADS_AND_CATEGORIES: (15, 10, 10, 5),
}


def test_gold_fixture_confusions_exact():
    metrics = evaluate_heuristics(gold_fixture(), RES)
    for kind, (tp, fp, fn, tn) in EXPECTED_CONFUSIONS.items():
        m = metrics[kind]
        assert (m.tp, m.fp, m.fn, m.tn) == (tp, fp, fn, tn), kind


def test_gold_fixture_derived_rates():
    metrics = evaluate_heuristics(gold_fixture(), RES)
    ads = metrics[HeuristicKind.PRODUCT_ADS]
    assert ads.precision == pytest.approx(10 / 15)
    assert ads.recall == pytest.approx(0.4)
    assert ads.f1 == pytest.approx(0.5)
    assert ads.accuracy == pytest.approx(0.5)
    lst = metrics[HeuristicKind.PRODUCT_LIST]
    assert lst.precision == 1.0
    assert lst.f1 == pytest.approx(4 / 7)
    assert lst.accuracy == pytest.approx(0.625)
    combo = metrics[HeuristicKind.ADS_AND_CATEGORIES]
    assert combo.precision == combo.recall == combo.f1 == pytest.approx(0.6)


def test_confusion_counts_partition_gold():
    gold = gold_fixture()
    metrics = evaluate_heuristics(gold, RES)
    for m in metrics.values():
        assert m.tp + m.fp + m.fn + m.tn == len(gold)


def test_zero_denominator_rules():
    # heuristic fires on nothing but gold has positives
    gold = [(make_record(query="plain words"), True)]
    m = evaluate_heuristics(gold, RES)[HeuristicKind.PRODUCT_LIST]
    assert m.precision == m.recall == m.f1 == 0.0


def test_perfect_heuristic_scores_one():
    gold = [
        (make_record(query_id="a", ads_shown=1), True),
        (make_record(query_id="b", ads_shown=0), False),
    ]
    m = evaluate_heuristics(gold, RES)[HeuristicKind.PRODUCT_ADS]
    assert m.precision == m.recall == m.f1 == m.accuracy == 1.0


def test_empty_gold_rejected():
    with pytest.raises(ValueError, match="empty"):
        evaluate_heuristics([], RES)


class TestBuildWeakSet:
    def records(self):
        recs = []
        for i in range(10):
            recs.append(make_record(query_id=f"p{i}", ads_shown=1))
        for i in range(10):
            recs.append(make_record(query_id=f"n{i}", ads_shown=0))
        return recs

    def test_samples_disjoint_strata(self):
        weak = build_weak_set(self.records(), HeuristicKind.PRODUCT_ADS, RES, 5, 5, seed=0)
        assert len(weak.positives) == len(weak.negatives) == 5
        assert set(weak.positives).isdisjoint(weak.negatives)
        assert all(qid.startswith("p") for qid in weak.positives)
        assert all(qid.startswith("n") for qid in weak.negatives)

    def test_deterministic_given_seed(self):
        a = build_weak_set(self.records(), HeuristicKind.PRODUCT_ADS, RES, 5, 5, seed=9)
        b = build_weak_set(self.records(), HeuristicKind.PRODUCT_ADS, RES, 5, 5, seed=9)
        assert a.positives == b.positives and a.negatives == b.negatives

    def test_exhausted_stratum_errors(self):
        with pytest.raises(ValueError, match=r"positives exhausted \(10 available\)"):
            build_weak_set(self.records(), HeuristicKind.PRODUCT_ADS, RES, 11, 5, seed=0)
        with pytest.raises(ValueError, match=r"negatives exhausted \(10 available\)"):
            build_weak_set(self.records(), HeuristicKind.PRODUCT_ADS, RES, 5, 11, seed=0)

    def test_save_load_round_trip(self, tmp_path):
        weak = build_weak_set(self.records(), HeuristicKind.PRODUCT_ADS, RES, 3, 3, seed=2)
        path = tmp_path / "weak.json"
        weak.save(path)
        back = WeakLabeledSet.load(path)
        assert back.positives == weak.positives
        assert back.negatives == weak.negatives
        assert back.heuristic == weak.heuristic
