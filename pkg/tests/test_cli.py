"""Pipeline commands end to end: exit codes, report files, and a planted
corpus whose product share is known exactly."""

import json

import pytest

from queryintent.cli import main
from queryintent.logs import write_records

from .conftest import make_click, make_record


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    """A small generated corpus shared by the read-only stage tests."""
    out = tmp_path_factory.mktemp("corpus")
    assert run("generate", "--sessions", 60, "--seed", 7, "--out", out) == 0
    return out


# --- generate -------------------------------------------------------------


def test_generate_writes_log_truth_and_report(corpus_dir):
    assert (corpus_dir / "log.jsonl").exists()
    assert (corpus_dir / "truth.tsv").exists()
    report = json.loads((corpus_dir / "generate.report.json").read_text())
    assert report["stage"] == "generate"
    assert report["parameters"]["seed"] == 7
    assert sum(report["results"]["intent_counts"].values()) == report["results"]["records"]
    assert len(report["config_hash"]) == 12


def test_generate_product_only_drops_noise(tmp_path):
    assert run("generate", "--sessions", 20, "--seed", 1, "--product-only", "--out", tmp_path) == 0
    truth = (tmp_path / "truth.tsv").read_text()
    assert "NotProduct" not in truth


def test_generate_exact_query_count(tmp_path):
    assert run("generate", "--sessions", 500, "--queries", 33, "--out", tmp_path) == 0
    report = json.loads((tmp_path / "generate.report.json").read_text())
    assert report["results"]["records"] == 33


def test_reports_never_embed_absolute_paths(corpus_dir):
    text = (corpus_dir / "generate.report.json").read_text()
    assert str(corpus_dir) not in text


def test_same_seed_reports_are_byte_identical(tmp_path):
    for name in ("one", "two"):
        assert run("generate", "--sessions", 15, "--seed", 4, "--out", tmp_path / name) == 0
    read = lambda name, f: (tmp_path / name / f).read_bytes()
    for artifact in ("log.jsonl", "truth.tsv", "generate.report.json"):
        assert read("one", artifact) == read("two", artifact)


# --- exit codes -----------------------------------------------------------


def test_missing_input_exits_2(tmp_path, capsys):
    code = run("evaluate-heuristics", "--log", tmp_path / "nope.jsonl",
               "--truth", tmp_path / "nope.tsv", "--out", tmp_path)
    assert code == 2
    assert "evaluate-heuristics: missing input" in capsys.readouterr().err


def test_usage_errors_exit_1():
    assert run("frobnicate") == 1
    assert run("weak-label") == 1  # missing required --log
    assert run() == 1


def test_corrupt_config_exits_2(tmp_path, capsys):
    bad = tmp_path / "gen.json"
    bad.write_text("{not json")
    assert run("generate", "--config", bad, "--out", tmp_path) == 2
    assert "config:" in capsys.readouterr().err


def test_unknown_config_key_exits_2(tmp_path, capsys):
    bad = tmp_path / "gen.json"
    bad.write_text('{"sessions": 5}')
    assert run("generate", "--config", bad, "--out", tmp_path) == 2
    assert "unknown generator config key" in capsys.readouterr().err


def test_truth_gap_exits_2(corpus_dir, tmp_path, capsys):
    truncated = tmp_path / "truth.tsv"
    lines = (corpus_dir / "truth.tsv").read_text().splitlines()
    truncated.write_text("\n".join(lines[:-1]) + "\n")
    code = run("evaluate-heuristics", "--log", corpus_dir / "log.jsonl",
               "--truth", truncated, "--out", tmp_path)
    assert code == 2
    assert "no gold label for" in capsys.readouterr().err


def test_failed_stage_leaves_no_report(tmp_path):
    run("evaluate-heuristics", "--log", tmp_path / "nope.jsonl",
        "--truth", tmp_path / "nope.tsv", "--out", tmp_path)
    assert not (tmp_path / "evaluate-heuristics.report.json").exists()


# --- heuristic evaluation -------------------------------------------------


def test_evaluate_heuristics_report_shape(corpus_dir, tmp_path):
    code = run("evaluate-heuristics", "--log", corpus_dir / "log.jsonl",
               "--truth", corpus_dir / "truth.tsv", "--out", tmp_path)
    assert code == 0
    report = json.loads((tmp_path / "evaluate-heuristics.report.json").read_text())
    results = report["results"]
    assert set(results) == {"ProductAds", "ProductCategories", "AdsAndCategories", "ProductList"}
    n = report["parameters"]["n_gold"]
    for row in results.values():
        assert row["tp"] + row["fp"] + row["fn"] + row["tn"] == n
        assert all(isinstance(row[k], int) for k in ("tp", "fp", "fn", "tn"))
        assert 0.0 <= row["f1"] <= 1.0
    assert report["inputs"]["log"]["file"] == "log.jsonl"
    assert len(report["inputs"]["log"]["sha256"]) == 12


# --- planted product share ------------------------------------------------


PRODUCT_TEXT = "buy acme widget online"
NOISE_TEXT = "weather forecast rain today"


@pytest.fixture(scope="module")
def planted_dir(tmp_path_factory):
    """1000 queries, exactly 150 of them product-like with ads."""
    out = tmp_path_factory.mktemp("planted")
    records = []
    for i in range(1000):
        product = i < 150
        records.append(
            make_record(
                query_id=f"q{i:06d}",
                session_id=f"s{i:05d}",
                query=PRODUCT_TEXT if product else NOISE_TEXT,
                ads_shown=1 if product else 0,
                clicks=(make_click(url="https://www.acme.com/widget", snippet="acme widget"),)
                if product
                else (),
            )
        )
    write_records(records, out / "log.jsonl")
    return out


def test_product_share_is_exact_on_planted_corpus(planted_dir):
    out = planted_dir
    log = out / "log.jsonl"
    assert run("weak-label", "--log", log, "--n-pos", 150, "--n-neg", 200, "--out", out) == 0
    assert run("build-vocab", "--log", log, "--vocab-size", 200, "--out", out) == 0
    assert run("train-embeddings", "--log", log, "--vocab", out / "vocab.txt",
               "--dim", 8, "--epochs", 1, "--out", out) == 0
    assert run("train-product", "--log", log, "--weakset", out / "weakset.json",
               "--vocab", out / "vocab.txt", "--embeddings", out / "embeddings.tsv",
               "--models", "KNN", "--out", out) == 0
    assert run("product-share", "--log", log, "--model", out / "product_model.json",
               "--vocab", out / "vocab.txt", "--embeddings", out / "embeddings.tsv",
               "--out", out) == 0

    report = json.loads((out / "product-share.report.json").read_text())
    assert report["results"]["display"] == "15.0%"
    assert report["results"]["n_product"] == 150
    ids = (out / "product_ids.txt").read_text().split()
    assert ids == [f"q{i:06d}" for i in range(150)]


def test_weak_label_report_counts(planted_dir):
    report = json.loads((planted_dir / "weak-label.report.json").read_text())
    assert report["results"]["positives"] == 150
    assert report["results"]["negatives"] == 200
    assert report["parameters"]["heuristic"] == "AdsAndCategories"


def test_trained_model_report_has_cv_table(planted_dir):
    report = json.loads((planted_dir / "train-product.report.json").read_text())
    entry = report["results"]["models"]["KNN"]
    assert entry["cv_accuracy"] == pytest.approx(100.0)
    assert entry["margin_over_majority"] == pytest.approx(100.0 - 200 / 350 * 100, abs=0.01)
    assert report["results"]["majority_accuracy"] == pytest.approx(200 / 350 * 100, abs=0.01)
    assert report["results"]["final_model"] == {"kind": "KNN", "file": "product_model.json"}
