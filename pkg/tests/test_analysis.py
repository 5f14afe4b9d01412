"""Session intent metrics: success rate, popularity, effort, co-occurrence."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from queryintent.analysis import (
    PRODUCT_INTENTS,
    IntentLabel,
    compute_metrics,
    cooccurrence,
    effort,
    is_successful,
    label_sessions,
    popularity,
    success_rate,
)
from queryintent.logs import Session

from .conftest import make_record, record_with_dwells

C = IntentLabel.COMPARISON
I = IntentLabel.INFORMATIONAL
N = IntentLabel.NAVIGATIONAL
S = IntentLabel.SUPPORT
T = IntentLabel.TRANSACTIONAL
NP = IntentLabel.NOT_PRODUCT


def idx(intent):
    return PRODUCT_INTENTS.index(intent)


# --- success --------------------------------------------------------------


def test_success_threshold_is_strict():
    dwells = [45.0, 10.0, 31.0, 30.0]
    labeled = [
        (record_with_dwells(f"q{i}", [d]), T) for i, d in enumerate(dwells)
    ]
    assert success_rate(labeled) == {T: pytest.approx(50.0)}


def test_success_uses_last_click_only():
    record = record_with_dwells("q1", [500.0, 5.0])
    assert not is_successful(record)
    assert is_successful(record_with_dwells("q2", [5.0, 500.0]))


def test_no_clicks_is_unsuccessful():
    assert not is_successful(make_record())
    assert success_rate([(make_record(), N)]) == {N: 0.0}


def test_success_rate_ignores_not_product():
    labeled = [
        (record_with_dwells("q1", [60.0]), T),
        (record_with_dwells("q2", [60.0]), NP),
    ]
    assert success_rate(labeled) == {T: pytest.approx(100.0)}


# --- popularity -----------------------------------------------------------


def test_popularity_hand_computed():
    shares = popularity([T, T, C, N])
    assert shares[T] == pytest.approx(50.0)
    assert shares[C] == pytest.approx(25.0)
    assert shares[N] == pytest.approx(25.0)


def test_popularity_excludes_not_product_from_denominator():
    shares = popularity([T, NP, NP, NP])
    assert shares == {T: pytest.approx(100.0)}


def test_popularity_requires_some_product_labels():
    with pytest.raises(ValueError, match="no product-intent labels"):
        popularity([NP, NP])


@given(
    st.lists(
        st.sampled_from([C, I, N, S, T, NP]),
        min_size=1,
        max_size=60,
    ).filter(lambda ls: any(l is not NP for l in ls))
)
def test_popularity_sums_to_100(labels):
    assert sum(popularity(labels).values()) == pytest.approx(100.0, abs=1e-6)


# --- effort ---------------------------------------------------------------


def test_effort_comparison_is_exactly_one():
    labeled = [
        (record_with_dwells("q1", [80.0, 20.0]), C),
        (record_with_dwells("q2", [50.0]), T),
    ]
    scaled = effort(labeled)
    assert scaled[C] == 1.0
    assert scaled[T] == pytest.approx(0.5)


def test_effort_uses_mean_total_dwell():
    labeled = [
        (record_with_dwells("q1", [100.0]), C),
        (record_with_dwells("q2", [300.0]), C),
        (record_with_dwells("q3", [400.0, 200.0]), I),
    ]
    scaled = effort(labeled)
    # comparison mean 200, informational mean 600
    assert scaled[I] == pytest.approx(3.0)
    assert scaled[C] == 1.0


def test_effort_needs_comparison_baseline():
    with pytest.raises(ValueError, match="comparison baseline"):
        effort([(record_with_dwells("q1", [50.0]), T)])


# --- co-occurrence --------------------------------------------------------


def test_cooccurrence_ordered_pair():
    matrix = cooccurrence([[C, T]])
    assert matrix[idx(T), idx(C)] == pytest.approx(100.0)
    assert matrix[idx(C), idx(T)] == pytest.approx(0.0)


def test_cooccurrence_counts_any_earlier_query():
    matrix = cooccurrence([[C, I, T]])
    assert matrix[idx(T), idx(C)] == pytest.approx(100.0)
    assert matrix[idx(T), idx(I)] == pytest.approx(100.0)
    assert matrix[idx(I), idx(C)] == pytest.approx(100.0)
    assert matrix[idx(C), idx(I)] == pytest.approx(0.0)


def test_cooccurrence_repeat_intent():
    matrix = cooccurrence([[T, T]])
    # second occurrence has the first as predecessor: 1 of 2 subjects
    assert matrix[idx(T), idx(T)] == pytest.approx(50.0)


def test_cooccurrence_skips_not_product():
    direct = cooccurrence([[C, T]])
    with_noise = cooccurrence([[C, NP, T]])
    np.testing.assert_allclose(with_noise, direct)


def test_cooccurrence_rows_without_subjects_are_zero():
    matrix = cooccurrence([[C, T]])
    for intent in (I, N, S):
        assert matrix[idx(intent)].tolist() == [0.0] * 5


def test_cooccurrence_averages_across_sessions():
    matrix = cooccurrence([[C, T], [T]])
    # T appears twice, preceded by C once -> 50%
    assert matrix[idx(T), idx(C)] == pytest.approx(50.0)


def test_cooccurrence_resets_between_sessions():
    matrix = cooccurrence([[C], [T]])
    assert matrix[idx(T), idx(C)] == pytest.approx(0.0)


# --- assembled report -----------------------------------------------------


def session_fixture():
    s1 = [
        (record_with_dwells("q1", [45.0], session_id="s1"), C),
        (record_with_dwells("q2", [10.0], session_id="s1"), T),
    ]
    s2 = [
        (record_with_dwells("q3", [31.0], session_id="s2"), T),
        (record_with_dwells("q4", [30.0], session_id="s2"), NP),
    ]
    return [s1, s2]


def test_compute_metrics_report_values():
    report = compute_metrics(session_fixture())
    assert report.counts == {C: 1, T: 2}
    assert report.success_rate[T] == pytest.approx(50.0)
    assert report.popularity[C] == pytest.approx(100.0 / 3)
    assert report.cooccurrence[idx(T), idx(C)] == pytest.approx(50.0)


def test_report_as_dict_uses_label_names():
    payload = compute_metrics(session_fixture()).as_dict()
    assert payload["counts"] == {"Comparison": 1, "Transactional": 2}
    assert payload["cooccurrence_order"][0] == "Comparison"
    assert len(payload["cooccurrence"]) == 5


def test_report_csv_has_metric_and_matrix_sections():
    lines = compute_metrics(session_fixture()).to_csv().splitlines()
    assert lines[0] == "Intent,Success Rate,Popularity,Estimated Effort"
    assert lines[1].startswith("Comparison,")
    assert any(ln.startswith("Cooccurrence,") for ln in lines)


def test_label_sessions_accepts_plain_strings():
    session = Session(
        session_id="s1",
        records=(record_with_dwells("q1", [5.0]), record_with_dwells("q9", [5.0])),
    )
    labeled = label_sessions([session], {"q1": "Transactional"})
    assert labeled == [[(session.records[0], T)]]


def test_label_sessions_drops_fully_unlabeled_sessions():
    session = Session(session_id="s1", records=(record_with_dwells("q1", [5.0]),))
    assert label_sessions([session], {}) == []
