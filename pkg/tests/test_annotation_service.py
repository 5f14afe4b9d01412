"""Label store durability, queue mechanics, and the HTTP annotation API."""

import json

import pytest
from fastapi.testclient import TestClient

from queryintent.annotation.server import create_app
from queryintent.annotation.store import (
    STATUS_COMPLETE,
    STATUS_PARTIAL,
    STATUS_PENDING,
    AnnotationItem,
    AnnotationQueue,
    LabelEvent,
    LabelStore,
    item_from_record,
    load_sample,
    save_sample,
)

from .conftest import make_click, make_record


def make_items(n=3):
    return [
        AnnotationItem(query_id=f"q{i}", topic=i % 2, query=f"query {i}")
        for i in range(1, n + 1)
    ]


@pytest.fixture
def store(tmp_path):
    return LabelStore(tmp_path / "labels.jsonl")


@pytest.fixture
def queue(store):
    return AnnotationQueue(make_items(), ["ann1", "ann2"], store)


# --- store ----------------------------------------------------------------


def test_store_appends_canonical_jsonl(store):
    store.append(LabelEvent("q1", "ann1", "Support", 12.5))
    line = store.path.read_text().strip()
    assert json.loads(line) == {
        "query_id": "q1",
        "annotator_id": "ann1",
        "label": "Support",
        "timestamp": 12.5,
    }


def test_store_replays_existing_file(tmp_path):
    first = LabelStore(tmp_path / "labels.jsonl")
    first.append(LabelEvent("q1", "ann1", "Support", 1.0))
    first.append(LabelEvent("q2", "ann2", "Skip", 2.0))

    reopened = LabelStore(tmp_path / "labels.jsonl")
    assert reopened.labels_for("q1") == {"ann1": "Support"}
    assert reopened.labels_for("q2") == {"ann2": "Skip"}
    assert reopened.event_count() == 2


def test_store_latest_event_wins(store):
    store.append(LabelEvent("q1", "ann1", "Support", 1.0))
    store.append(LabelEvent("q1", "ann1", "Transactional", 2.0))
    assert store.labels_for("q1") == {"ann1": "Transactional"}
    assert store.event_count() == 2  # history kept on disk


def test_store_rejects_unknown_label(store):
    with pytest.raises(ValueError, match="unknown label"):
        store.append(LabelEvent("q1", "ann1", "Banana", 1.0))
    assert store.path.read_text() == ""


def test_store_reports_corrupt_line_with_location(tmp_path):
    path = tmp_path / "labels.jsonl"
    path.write_text('{"query_id": "q1"}\n')
    with pytest.raises(ValueError, match=r"labels\.jsonl:1: "):
        LabelStore(path)


def test_store_ignores_blank_lines(tmp_path):
    path = tmp_path / "labels.jsonl"
    event = LabelEvent("q1", "ann1", "Support", 1.0).to_dict()
    path.write_text("\n" + json.dumps(event) + "\n\n")
    assert LabelStore(path).event_count() == 1


# --- queue ----------------------------------------------------------------


def test_queue_orders_by_topic_then_id(queue):
    assert [item.query_id for item in queue.items] == ["q2", "q1", "q3"]


def test_queue_rejects_duplicate_items(store):
    items = make_items() + [AnnotationItem("q1", 0, "dup")]
    with pytest.raises(ValueError, match="duplicate item: q1"):
        AnnotationQueue(items, ["ann1"], store)


def test_queue_requires_annotators(store):
    with pytest.raises(ValueError, match="at least one annotator"):
        AnnotationQueue(make_items(), [], store)


def test_next_item_walks_unlabeled_in_order(queue):
    assert queue.next_item("ann1").query_id == "q2"
    queue.submit("ann1", "q2", "Support")
    assert queue.next_item("ann1").query_id == "q1"
    # the other annotator still starts at the front
    assert queue.next_item("ann2").query_id == "q2"


def test_next_item_exhausted_returns_none(queue):
    for qid in ("q1", "q2", "q3"):
        queue.submit("ann1", qid, "Skip")
    assert queue.next_item("ann1") is None


def test_queue_unknown_ids_raise(queue):
    with pytest.raises(KeyError, match="unknown annotator: ghost"):
        queue.next_item("ghost")
    with pytest.raises(KeyError, match="unknown item: q99"):
        queue.submit("ann1", "q99", "Support")
    with pytest.raises(ValueError, match="unknown label"):
        queue.submit("ann1", "q1", "Banana")


def test_item_status_progression(queue):
    assert queue.item_status("q1") == STATUS_PENDING
    queue.submit("ann1", "q1", "Support")
    assert queue.item_status("q1") == STATUS_PARTIAL
    queue.submit("ann2", "q1", "Navigational")
    assert queue.item_status("q1") == STATUS_COMPLETE


def test_progress_counts(queue):
    queue.submit("ann1", "q1", "Support")
    queue.submit("ann1", "q2", "Support")
    queue.submit("ann2", "q2", "Support")
    progress = queue.progress()
    assert progress["n_items"] == 3
    assert progress["statuses"] == {
        STATUS_PENDING: 1,
        STATUS_PARTIAL: 1,
        STATUS_COMPLETE: 1,
    }
    assert progress["annotators"]["ann1"] == {"labeled": 2, "total": 3}
    assert progress["annotators"]["ann2"] == {"labeled": 1, "total": 3}


def test_item_from_record_carries_click_context():
    record = make_record(
        query="red bike",
        clicks=(make_click(url="https://a.com/x", snippet="about x"),),
    )
    item = item_from_record(record, topic=7)
    assert item.topic == 7
    assert item.clicks == ({"url": "https://a.com/x", "snippet": "about x"},)


def test_sample_file_round_trip(tmp_path):
    pairs = [("q5", 0), ("q2", 3)]
    path = tmp_path / "sample.tsv"
    save_sample(path, pairs)
    assert load_sample(path) == pairs


def test_sample_file_rejects_bad_line(tmp_path):
    path = tmp_path / "sample.tsv"
    path.write_text("q1\t0\nq2 3\n")
    with pytest.raises(ValueError, match="sample.tsv:2"):
        load_sample(path)


# --- HTTP API -------------------------------------------------------------


@pytest.fixture
def client(queue, store):
    return TestClient(create_app(queue, store))


def test_api_label_choices(client):
    labels = client.get("/api/labels/choices").json()["labels"]
    assert labels[-1] == "Skip"
    assert len(labels) == 7


def test_api_next_then_submit_walks_queue(client):
    first = client.get("/api/items/next", params={"annotator": "ann1"}).json()
    assert first["item"]["query_id"] == "q2"
    assert first["remaining"] == 3

    response = client.post(
        "/api/labels",
        json={"annotator": "ann1", "query_id": "q2", "label": "Support"},
    )
    assert response.status_code == 200
    assert response.json() == {"ok": True, "status": STATUS_PARTIAL}

    second = client.get("/api/items/next", params={"annotator": "ann1"}).json()
    assert second["item"]["query_id"] == "q1"
    assert second["remaining"] == 2
    assert second["labeled"] == 1


def test_api_finished_annotator_sees_none(client):
    for qid in ("q1", "q2", "q3"):
        client.post(
            "/api/labels",
            json={"annotator": "ann2", "query_id": qid, "label": "Skip"},
        )
    done = client.get("/api/items/next", params={"annotator": "ann2"}).json()
    assert done == {"item": None, "remaining": 0, "labeled": 3}


def test_api_get_item_detail(client):
    client.post(
        "/api/labels",
        json={"annotator": "ann1", "query_id": "q1", "label": "Support"},
    )
    payload = client.get("/api/items/q1").json()
    assert payload["item"]["query"] == "query 1"
    assert payload["status"] == STATUS_PARTIAL
    assert payload["labels"] == {"ann1": "Support"}


def test_api_error_codes(client):
    assert client.get("/api/items/nope").status_code == 404
    assert (
        client.get("/api/items/next", params={"annotator": "ghost"}).status_code == 400
    )
    bad_item = client.post(
        "/api/labels",
        json={"annotator": "ann1", "query_id": "q99", "label": "Support"},
    )
    assert bad_item.status_code == 404
    bad_annotator = client.post(
        "/api/labels",
        json={"annotator": "ghost", "query_id": "q1", "label": "Support"},
    )
    assert bad_annotator.status_code == 400
    bad_label = client.post(
        "/api/labels",
        json={"annotator": "ann1", "query_id": "q1", "label": "Banana"},
    )
    assert bad_label.status_code == 400
    malformed = client.post("/api/labels", json={"annotator": "ann1"})
    assert malformed.status_code == 422


def test_api_rejected_submission_leaves_store_untouched(client, store):
    client.post(
        "/api/labels",
        json={"annotator": "ann1", "query_id": "q99", "label": "Support"},
    )
    client.post("/api/labels", json={"annotator": "ann1"})
    assert store.event_count() == 0
    assert store.path.read_text() == ""


def test_api_progress_and_agreement(client):
    for annotator in ("ann1", "ann2"):
        for qid in ("q1", "q2", "q3"):
            client.post(
                "/api/labels",
                json={"annotator": annotator, "query_id": qid, "label": "Support"},
            )
    progress = client.get("/api/progress").json()
    assert progress["statuses"][STATUS_COMPLETE] == 3

    agreement = client.get("/api/agreement").json()
    assert agreement["kappa"] == 1.0
    assert agreement["n_items"] == 3
    assert agreement["consensus"] == {"q1": "Support", "q2": "Support", "q3": "Support"}


def test_api_agreement_before_any_labels(client):
    payload = client.get("/api/agreement").json()
    assert payload["kappa"] is None
    assert payload["consensus"] == {}
