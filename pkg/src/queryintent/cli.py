"""Command-line pipeline: generate logs, label, train, sample, serve, analyze.

Every stage reads explicit inputs, writes its artifacts plus a JSON report
into --out, and embeds seeds, parameter hashes, and input digests so a rerun
with identical inputs reproduces identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

import click
import numpy as np

from queryintent import __version__
from queryintent.analysis import (
    IntentLabel,
    PRODUCT_INTENTS,
    compute_metrics,
    label_sessions,
)
from queryintent.annotation.agreement import agreement_from_events, consensus_labels
from queryintent.annotation.store import (
    AnnotationQueue,
    LabelStore,
    item_from_record,
    load_sample,
    save_sample,
)
from queryintent.features import assemble_matrix, extract_features, save_features_csv
from queryintent.learners import Dataset, cross_validate
from queryintent.learners.io import TrainedModel, canonical_kind, make_classifier, train
from queryintent.logs import build_sessions, load_records, write_records
from queryintent.syngen import GeneratorConfig, generate, load_truth, write_truth
from queryintent.text import (
    Vocab,
    embed_text,
    learn_vocab,
    load_embeddings,
    save_embeddings,
    tokenize,
    train_embeddings,
    url_words,
)
from queryintent.topics import LdaGibbs, build_doc, sample_per_topic, save_topic_summary
from queryintent.weaklabel import (
    HeuristicKind,
    ResourceLists,
    WeakLabeledSet,
    build_weak_set,
    evaluate_heuristics,
)

_HEURISTIC_NAMES = [kind.value for kind in HeuristicKind]
_PRODUCT_CLASSES = ["non-product", "product"]


class StageFailure(click.ClickException):
    exit_code = 2


def _fail(stage: str, message) -> "StageFailure":
    return StageFailure(f"{stage}: {message}")


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()[:12]


def _digest(payload) -> str:
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


def _require(stage: str, path: str | Path) -> Path:
    resolved = Path(path)
    if not resolved.exists():
        raise _fail(stage, f"missing input: {resolved}")
    return resolved


def _load_log(stage: str, path: str | Path):
    try:
        return load_records(_require(stage, path))
    except ValueError as exc:
        raise _fail(stage, exc)


def _out_dir(out: str) -> Path:
    directory = Path(out)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _write_report(
    out: Path,
    stage: str,
    params: dict,
    inputs: dict[str, Path],
    results: dict,
) -> Path:
    report = {
        "stage": stage,
        "version": __version__,
        "parameters": params,
        "config_hash": _digest(params),
        "inputs": {
            name: {"file": Path(p).name, "sha256": _sha256_file(Path(p))}
            for name, p in sorted(inputs.items())
        },
        "results": results,
    }
    path = out / f"{stage}.report.json"
    path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n", "utf-8")
    return path


def _load_json_config(path: str | None) -> dict:
    if path is None:
        return {}
    resolved = _require("config", path)
    try:
        data = json.loads(resolved.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise _fail("config", f"{resolved.name}: {exc}")
    if not isinstance(data, dict):
        raise _fail("config", f"{resolved.name}: expected a JSON object")
    return data


def _setting(config: dict, key: str, flag_value, default):
    if flag_value is not None:
        return flag_value
    if key in config:
        return config[key]
    return default


def _resources(stage: str, categories: str | None, products: str | None) -> ResourceLists:
    if categories is None and products is None:
        return ResourceLists.bundled()
    if categories is None or products is None:
        raise _fail(stage, "--categories and --products must be given together")
    return ResourceLists.load(_require(stage, categories), _require(stage, products))


def _record_text(record) -> str:
    parts = [record.query]
    for click_event in record.clicks:
        parts.append(" ".join(url_words(click_event.url)))
        parts.append(click_event.snippet)
    return " ".join(parts)


def _tokenized_docs(records, vocab: Vocab) -> list[list[str]]:
    return [tokenize(_record_text(record), vocab) for record in records]


def _feature_rows(stage: str, records, vocab: Vocab, table) -> tuple[list[str], list]:
    ids, rows = [], []
    for record in records:
        ids.append(record.query_id)
        rows.append(extract_features(record, table, vocab))
    if not rows:
        raise _fail(stage, "no records to featurize")
    return ids, rows


def _load_vocab(stage: str, path: str) -> Vocab:
    try:
        return Vocab.load(_require(stage, path))
    except ValueError as exc:
        raise _fail(stage, exc)


def _load_table(stage: str, path: str):
    try:
        return load_embeddings(_require(stage, path))
    except ValueError as exc:
        raise _fail(stage, exc)


def _load_labels(stage: str, path: str) -> dict[str, str]:
    try:
        return load_truth(_require(stage, path))
    except ValueError as exc:
        raise _fail(stage, exc)


def _read_ids(stage: str, path: str) -> list[str]:
    lines = _require(stage, path).read_text("utf-8").splitlines()
    return [line.strip() for line in lines if line.strip()]


@click.group()
@click.version_option(version=__version__)
def cli():
    """Query-log mining pipeline."""


@cli.command("generate")
@click.option("--config", "config_path", type=str, default=None, help="Generator config JSON.")
@click.option("--sessions", type=int, default=None, help="Number of sessions.")
@click.option("--queries", type=int, default=None, help="Stop after exactly this many queries.")
@click.option("--seed", type=int, default=None)
@click.option("--product-only", is_flag=True, help="Restrict the mix to the five product intents.")
@click.option("--out", default=".", show_default=True)
def generate_cmd(config_path, sessions, queries, seed, product_only, out):
    """Generate a synthetic log plus its intent truth file."""
    stage = "generate"
    raw = _load_json_config(config_path)
    if sessions is not None:
        raw["n_sessions"] = sessions
    if queries is not None:
        raw["n_queries"] = queries
    if seed is not None:
        raw["seed"] = seed
    try:
        config = GeneratorConfig.from_dict(raw)
        if product_only:
            product = {
                name.value: config.intent_mix.get(name.value, 0.0)
                for name in PRODUCT_INTENTS
            }
            total = sum(product.values())
            if total <= 0:
                raise ValueError("product-only mix has no product mass")
            mix = {name: prob / total for name, prob in product.items()}
            mix["NotProduct"] = 0.0
            config = GeneratorConfig(
                n_sessions=config.n_sessions,
                seed=config.seed,
                intent_mix=mix,
                n_queries=config.n_queries,
                session_lengths=config.session_lengths,
                profiles=config.profiles,
            )
        records, truth = generate(config)
    except ValueError as exc:
        raise _fail(stage, exc)
    out_path = _out_dir(out)
    log_path = out_path / "log.jsonl"
    truth_path = out_path / "truth.tsv"
    write_records(records, log_path)
    write_truth(truth_path, truth)
    counts = {}
    for label in truth.values():
        counts[label] = counts.get(label, 0) + 1
    params = {
        "n_sessions": config.n_sessions,
        "n_queries": config.n_queries,
        "seed": config.seed,
        "intent_mix": {k: config.intent_mix[k] for k in sorted(config.intent_mix)},
        "product_only": bool(product_only),
    }
    results = {
        "records": len(records),
        "sessions": len({r.session_id for r in records}),
        "intent_counts": dict(sorted(counts.items())),
        "log": log_path.name,
        "truth": truth_path.name,
    }
    _write_report(out_path, stage, params, {}, results)
    click.echo(f"{stage}: wrote {len(records)} records to {log_path}")


@cli.command("evaluate-heuristics")
@click.option("--log", "log_path", required=True)
@click.option("--truth", "truth_path", required=True, help="TSV of query_id<TAB>intent.")
@click.option("--categories", default=None)
@click.option("--products", default=None)
@click.option("--out", default=".", show_default=True)
def evaluate_heuristics_cmd(log_path, truth_path, categories, products, out):
    """Score the four weak-labeling heuristics against gold product labels."""
    stage = "evaluate-heuristics"
    records = _load_log(stage, log_path)
    truth = _load_labels(stage, truth_path)
    res = _resources(stage, categories, products)
    gold = []
    for record in records:
        if record.query_id not in truth:
            raise _fail(stage, f"no gold label for {record.query_id}")
        gold.append((record, truth[record.query_id] != IntentLabel.NOT_PRODUCT.value))
    try:
        metrics = evaluate_heuristics(gold, res)
    except ValueError as exc:
        raise _fail(stage, exc)
    results = {}
    for kind, m in metrics.items():
        results[kind.value] = {
            "precision": round(m.precision, 4),
            "recall": round(m.recall, 4),
            "f1": round(m.f1, 4),
            "accuracy": round(m.accuracy, 4),
            "tp": m.tp, "fp": m.fp, "fn": m.fn, "tn": m.tn,
        }
    out_path = _out_dir(out)
    inputs = {"log": Path(log_path), "truth": Path(truth_path)}
    _write_report(out_path, stage, {"n_gold": len(gold)}, inputs, results)
    for name, row in results.items():
        click.echo(
            f"{name}: P={row['precision']:.4f} R={row['recall']:.4f} "
            f"F1={row['f1']:.4f} Acc={row['accuracy']:.4f}"
        )


@cli.command("weak-label")
@click.option("--log", "log_path", required=True)
@click.option("--heuristic", type=click.Choice(_HEURISTIC_NAMES), default="AdsAndCategories", show_default=True)
@click.option("--n-pos", type=int, default=1000, show_default=True)
@click.option("--n-neg", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--categories", default=None)
@click.option("--products", default=None)
@click.option("--out", default=".", show_default=True)
def weak_label_cmd(log_path, heuristic, n_pos, n_neg, seed, categories, products, out):
    """Sample a balanced weakly-labeled product/non-product training set."""
    stage = "weak-label"
    records = _load_log(stage, log_path)
    res = _resources(stage, categories, products)
    try:
        weak = build_weak_set(records, HeuristicKind(heuristic), res, n_pos, n_neg, seed)
    except ValueError as exc:
        raise _fail(stage, exc)
    out_path = _out_dir(out)
    weak_path = out_path / "weakset.json"
    weak.save(weak_path)
    params = {"heuristic": heuristic, "n_pos": n_pos, "n_neg": n_neg, "seed": seed}
    results = {
        "positives": len(weak.positives),
        "negatives": len(weak.negatives),
        "weakset": weak_path.name,
    }
    _write_report(out_path, stage, params, {"log": Path(log_path)}, results)
    click.echo(f"{stage}: {len(weak.positives)}+{len(weak.negatives)} ids -> {weak_path}")


@cli.command("build-vocab")
@click.option("--log", "log_path", required=True)
@click.option("--vocab-size", type=int, default=8000, show_default=True)
@click.option("--out", default=".", show_default=True)
def build_vocab_cmd(log_path, vocab_size, out):
    """Learn a wordpiece vocabulary from query, url, and snippet text."""
    stage = "build-vocab"
    records = _load_log(stage, log_path)
    corpus = [_record_text(record) for record in records]
    try:
        vocab = learn_vocab(corpus, vocab_size)
    except ValueError as exc:
        raise _fail(stage, exc)
    out_path = _out_dir(out)
    vocab_path = out_path / "vocab.txt"
    vocab.save(vocab_path)
    params = {"vocab_size": vocab_size}
    results = {"pieces": vocab.size, "documents": len(corpus), "vocab": vocab_path.name}
    _write_report(out_path, stage, params, {"log": Path(log_path)}, results)
    click.echo(f"{stage}: {vocab.size} pieces -> {vocab_path}")


@cli.command("train-embeddings")
@click.option("--log", "log_path", required=True)
@click.option("--vocab", "vocab_path", required=True)
@click.option("--dim", type=int, default=50, show_default=True)
@click.option("--window", type=int, default=4, show_default=True)
@click.option("--negatives", type=int, default=5, show_default=True)
@click.option("--epochs", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default=".", show_default=True)
def train_embeddings_cmd(log_path, vocab_path, dim, window, negatives, epochs, seed, out):
    """Train skip-gram piece embeddings over the tokenized corpus."""
    stage = "train-embeddings"
    records = _load_log(stage, log_path)
    vocab = _load_vocab(stage, vocab_path)
    docs = _tokenized_docs(records, vocab)
    try:
        table = train_embeddings(
            docs, dim=dim, window=window, negatives=negatives,
            epochs=epochs, seed=seed,
        )
    except ValueError as exc:
        raise _fail(stage, exc)
    out_path = _out_dir(out)
    emb_path = out_path / "embeddings.tsv"
    save_embeddings(table, emb_path)
    params = {
        "dim": dim, "window": window, "negatives": negatives,
        "epochs": epochs, "seed": seed,
    }
    results = {
        "pieces": len(table.vectors),
        "documents": len(docs),
        "embeddings": emb_path.name,
    }
    inputs = {"log": Path(log_path), "vocab": Path(vocab_path)}
    _write_report(out_path, stage, params, inputs, results)
    click.echo(f"{stage}: {len(table.vectors)} vectors -> {emb_path}")


def _weak_dataset(stage, records, weak, vocab, table) -> Dataset:
    by_id = {record.query_id: record for record in records}
    ids = list(weak.positives) + list(weak.negatives)
    missing = [qid for qid in ids if qid not in by_id]
    if missing:
        raise _fail(stage, f"weak set references unknown query id {missing[0]}")
    _, rows = _feature_rows(stage, [by_id[qid] for qid in ids], vocab, table)
    labels = [1] * len(weak.positives) + [0] * len(weak.negatives)
    return Dataset(assemble_matrix(rows), np.asarray(labels), list(_PRODUCT_CLASSES))


@cli.command("train-product")
@click.option("--log", "log_path", required=True)
@click.option("--weakset", "weak_path", required=True)
@click.option("--vocab", "vocab_path", required=True)
@click.option("--embeddings", "emb_path", required=True)
@click.option("--models", default="MLP,LinearSVM", show_default=True, help="Comma-separated classifier kinds.")
@click.option("--folds", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default=".", show_default=True)
def train_product_cmd(log_path, weak_path, vocab_path, emb_path, models, folds, seed, out):
    """Cross-validate product classifiers on the weak set; save the best."""
    stage = "train-product"
    records = _load_log(stage, log_path)
    try:
        weak = WeakLabeledSet.load(_require(stage, weak_path))
    except ValueError as exc:
        raise _fail(stage, exc)
    vocab = _load_vocab(stage, vocab_path)
    table = _load_table(stage, emb_path)
    dataset = _weak_dataset(stage, records, weak, vocab, table)
    kinds = [part.strip() for part in models.split(",") if part.strip()]
    if not kinds:
        raise _fail(stage, "no classifier kinds given")
    counts = np.bincount(dataset.labels)
    majority = 100.0 * counts.max() / counts.sum()
    results = {"majority_accuracy": round(majority, 4), "models": {}}
    best = None
    for kind in kinds:
        try:
            name = canonical_kind(kind)
            estimator = make_classifier(name, seed=seed)
            report = cross_validate(estimator, dataset, k=folds, seed=seed)
        except ValueError as exc:
            raise _fail(stage, exc)
        results["models"][name] = {
            "cv_accuracy": round(report.accuracy, 4),
            "margin_over_majority": round(report.accuracy - majority, 4),
            "per_class": report.as_dict()["per_class"],
        }
        if best is None or report.accuracy > best[1]:
            best = (name, report.accuracy)
    final_kind = best[0]
    try:
        model = train(final_kind, dataset, seed=seed)
    except ValueError as exc:
        raise _fail(stage, exc)
    out_path = _out_dir(out)
    model_path = out_path / "product_model.json"
    model.save(model_path)
    results["final_model"] = {"kind": final_kind, "file": model_path.name}
    params = {"models": kinds, "folds": folds, "seed": seed}
    inputs = {
        "log": Path(log_path), "weakset": Path(weak_path),
        "vocab": Path(vocab_path), "embeddings": Path(emb_path),
    }
    _write_report(out_path, stage, params, inputs, results)
    for name, row in results["models"].items():
        click.echo(f"{name}: cv_accuracy={row['cv_accuracy']:.2f} (majority {majority:.2f})")


@cli.command("product-share")
@click.option("--log", "log_path", required=True)
@click.option("--model", "model_path", required=True)
@click.option("--vocab", "vocab_path", required=True)
@click.option("--embeddings", "emb_path", required=True)
@click.option("--out", default=".", show_default=True)
def product_share_cmd(log_path, model_path, vocab_path, emb_path, out):
    """Classify the corpus and report the share of product queries."""
    stage = "product-share"
    records = _load_log(stage, log_path)
    vocab = _load_vocab(stage, vocab_path)
    table = _load_table(stage, emb_path)
    try:
        model = TrainedModel.load(_require(stage, model_path))
    except ValueError as exc:
        raise _fail(stage, exc)
    ids, rows = _feature_rows(stage, records, vocab, table)
    try:
        predictions = model.predict(assemble_matrix(rows))
    except ValueError as exc:
        raise _fail(stage, exc)
    product_ids = [qid for qid, label in zip(ids, predictions) if label == 1]
    share = 100.0 * len(product_ids) / len(ids)
    out_path = _out_dir(out)
    ids_path = out_path / "product_ids.txt"
    ids_path.write_text("\n".join(product_ids) + ("\n" if product_ids else ""), "utf-8")
    results = {
        "n_queries": len(ids),
        "n_product": len(product_ids),
        "product_share_percent": round(share, 4),
        "display": f"{share:.1f}%",
        "product_ids": ids_path.name,
    }
    inputs = {
        "log": Path(log_path), "model": Path(model_path),
        "vocab": Path(vocab_path), "embeddings": Path(emb_path),
    }
    _write_report(out_path, stage, {}, inputs, results)
    click.echo(f"{stage}: {results['display']} ({len(product_ids)}/{len(ids)})")


@cli.command()
@click.option("--log", "log_path", required=True)
@click.option("--vocab", "vocab_path", required=True)
@click.option("--ids", "ids_path", default=None, help="Restrict to these query ids.")
@click.option("--topics", type=int, default=50, show_default=True)
@click.option("--alpha", type=float, default=None, help="Defaults to 50/topics.")
@click.option("--beta", type=float, default=0.01, show_default=True)
@click.option("--iterations", type=int, default=500, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default=".", show_default=True)
def lda(log_path, vocab_path, ids_path, topics, alpha, beta, iterations, seed, out):
    """Cluster queries by topic with collapsed-Gibbs LDA."""
    stage = "lda"
    records = _load_log(stage, log_path)
    vocab = _load_vocab(stage, vocab_path)
    if ids_path is not None:
        keep = set(_read_ids(stage, ids_path))
        records = [record for record in records if record.query_id in keep]
    docs = [build_doc(record, vocab) for record in records]
    skipped = sum(1 for doc in docs if not doc.token_ids)
    docs = [doc for doc in docs if doc.token_ids]
    model = LdaGibbs(
        n_topics=topics, alpha=alpha, beta=beta, iterations=iterations, seed=seed
    )
    try:
        model.fit(docs, vocab_size=vocab.size)
    except ValueError as exc:
        raise _fail(stage, exc)
    out_path = _out_dir(out)
    topics_path = out_path / "topics.txt"
    save_topic_summary(model, vocab, topics_path)
    memberships = model.memberships()
    members_path = out_path / "memberships.json"
    members_path.write_text(
        json.dumps({str(k): v for k, v in memberships.items()}, sort_keys=True, indent=2) + "\n",
        "utf-8",
    )
    history = [(it, round(ll, 4)) for it, ll in model.likelihood_history_]
    params = {
        "topics": topics, "alpha": model.alpha, "beta": beta,
        "iterations": iterations, "seed": seed,
    }
    results = {
        "documents": len(docs),
        "skipped_empty": skipped,
        "log_likelihood": history,
        "topics_file": topics_path.name,
        "memberships": members_path.name,
    }
    inputs = {"log": Path(log_path), "vocab": Path(vocab_path)}
    if ids_path is not None:
        inputs["ids"] = Path(ids_path)
    _write_report(out_path, stage, params, inputs, results)
    click.echo(f"{stage}: {len(docs)} docs, {topics} topics -> {topics_path}")


@cli.command("sample-annotation")
@click.option("--memberships", "members_path", required=True)
@click.option("--per-cluster", type=int, default=30, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default=".", show_default=True)
def sample_annotation_cmd(members_path, per_cluster, seed, out):
    """Draw up to m queries per topic cluster for human annotation."""
    stage = "sample-annotation"
    raw = json.loads(_require(stage, members_path).read_text("utf-8"))
    memberships = {int(topic): list(ids) for topic, ids in raw.items()}
    try:
        pairs = sample_per_topic(memberships, per_cluster, seed)
    except ValueError as exc:
        raise _fail(stage, exc)
    out_path = _out_dir(out)
    sample_path = out_path / "sample.tsv"
    save_sample(sample_path, pairs)
    params = {"per_cluster": per_cluster, "seed": seed}
    results = {
        "topics": len(memberships),
        "sampled": len(pairs),
        "sample": sample_path.name,
    }
    _write_report(out_path, stage, params, {"memberships": Path(members_path)}, results)
    click.echo(f"{stage}: {len(pairs)} queries -> {sample_path}")


@cli.command("serve-annotation")
@click.option("--log", "log_path", required=True)
@click.option("--sample", "sample_path", required=True)
@click.option("--store", "store_path", required=True)
@click.option("--annotators", required=True, help="Comma-separated annotator ids.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8765, show_default=True)
@click.option("--ui", "ui_dir", default=None, help="Static directory for the web UI.")
def serve_annotation_cmd(log_path, sample_path, store_path, annotators, host, port, ui_dir):
    """Serve the annotation HTTP API (and optionally the web UI)."""
    stage = "serve-annotation"
    import uvicorn

    from queryintent.annotation.server import create_app

    records = _load_log(stage, log_path)
    by_id = {record.query_id: record for record in records}
    try:
        pairs = load_sample(_require(stage, sample_path))
    except ValueError as exc:
        raise _fail(stage, exc)
    missing = [qid for qid, _ in pairs if qid not in by_id]
    if missing:
        raise _fail(stage, f"sample references unknown query id {missing[0]}")
    items = [item_from_record(by_id[qid], topic) for qid, topic in pairs]
    names = [name.strip() for name in annotators.split(",") if name.strip()]
    if not names:
        raise _fail(stage, "no annotator ids given")
    if ui_dir is not None:
        _require(stage, ui_dir)
    store = LabelStore(store_path)
    queue = AnnotationQueue(items, names, store)
    app = create_app(queue, store, ui_dir=ui_dir)
    click.echo(f"{stage}: serving {len(items)} items on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@cli.command()
@click.option("--store", "store_path", required=True)
@click.option("--annotators", default=None, help="Comma-separated; defaults to all seen in the store.")
@click.option("--out", default=".", show_default=True)
def kappa(store_path, annotators, out):
    """Compute Fleiss' kappa and consensus labels from a label store."""
    stage = "kappa"
    try:
        store = LabelStore(_require(stage, store_path))
    except ValueError as exc:
        raise _fail(stage, exc)
    by_item = store.labels_by_item()
    if annotators:
        names = [name.strip() for name in annotators.split(",") if name.strip()]
    else:
        names = sorted({a for given in by_item.values() for a in given})
    if not names:
        raise _fail(stage, "label store is empty")
    report = agreement_from_events(by_item, names)
    consensus = consensus_labels(by_item)
    out_path = _out_dir(out)
    consensus_path = out_path / "consensus.tsv"
    write_truth(consensus_path, consensus)
    results = dict(report.as_dict())
    results["consensus_items"] = len(consensus)
    results["consensus"] = consensus_path.name
    params = {"annotators": names}
    _write_report(out_path, stage, params, {"store": Path(store_path)}, results)
    shown = "undefined" if report.kappa is None else f"{report.kappa:.4f}"
    click.echo(f"{stage}: kappa={shown} over {report.n_items} items")


@cli.command()
@click.option("--log", "log_path", required=True)
@click.option("--vocab", "vocab_path", required=True)
@click.option("--embeddings", "emb_path", required=True)
@click.option("--ids", "ids_path", default=None)
@click.option("--out", default=".", show_default=True)
def features(log_path, vocab_path, emb_path, ids_path, out):
    """Extract the classifier feature matrix to CSV."""
    stage = "features"
    records = _load_log(stage, log_path)
    vocab = _load_vocab(stage, vocab_path)
    table = _load_table(stage, emb_path)
    if ids_path is not None:
        keep = set(_read_ids(stage, ids_path))
        records = [record for record in records if record.query_id in keep]
    ids, rows = _feature_rows(stage, records, vocab, table)
    out_path = _out_dir(out)
    csv_path = out_path / "features.csv"
    save_features_csv(ids, rows, csv_path)
    results = {"rows": len(ids), "dim": rows[0].dim, "features": csv_path.name}
    inputs = {
        "log": Path(log_path), "vocab": Path(vocab_path), "embeddings": Path(emb_path),
    }
    if ids_path is not None:
        inputs["ids"] = Path(ids_path)
    _write_report(out_path, stage, {}, inputs, results)
    click.echo(f"{stage}: {len(ids)} rows -> {csv_path}")


def _intent_class_names(include_not_product: bool) -> list[str]:
    names = [label.value for label in PRODUCT_INTENTS]
    if include_not_product:
        names.append(IntentLabel.NOT_PRODUCT.value)
    return names


@cli.command("train-intent")
@click.option("--log", "log_path", required=True)
@click.option("--labels", "labels_path", required=True, help="TSV of query_id<TAB>intent.")
@click.option("--vocab", "vocab_path", required=True)
@click.option("--embeddings", "emb_path", required=True)
@click.option("--model", "model_kind", default="LinearSVM", show_default=True)
@click.option("--folds", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--include-not-product", is_flag=True, help="Train 6-way instead of 5-way.")
@click.option("--out", default=".", show_default=True)
def train_intent_cmd(
    log_path, labels_path, vocab_path, emb_path, model_kind, folds, seed,
    include_not_product, out,
):
    """Cross-validate and fit the intent classifier on labeled queries."""
    stage = "train-intent"
    records = _load_log(stage, log_path)
    labels = _load_labels(stage, labels_path)
    vocab = _load_vocab(stage, vocab_path)
    table = _load_table(stage, emb_path)
    class_names = _intent_class_names(include_not_product)
    class_ids = {name: i for i, name in enumerate(class_names)}
    usable = [
        record for record in records
        if labels.get(record.query_id) in class_ids
    ]
    if not usable:
        raise _fail(stage, "no labeled records match the class set")
    ids, rows = _feature_rows(stage, usable, vocab, table)
    y = np.asarray([class_ids[labels[qid]] for qid in ids])
    dataset = Dataset(assemble_matrix(rows), y, class_names)
    try:
        kind = canonical_kind(model_kind)
        estimator = make_classifier(kind, seed=seed)
        report = cross_validate(estimator, dataset, k=folds, seed=seed)
        model = train(kind, dataset, seed=seed)
    except ValueError as exc:
        raise _fail(stage, exc)
    out_path = _out_dir(out)
    model_path = out_path / "intent_model.json"
    model.save(model_path)
    params = {
        "model": kind, "folds": folds, "seed": seed,
        "classes": class_names,
    }
    results = {
        "examples": len(ids),
        "cv": report.as_dict(),
        "macro_f1": round(report.macro_f1, 4),
        "model_file": model_path.name,
    }
    inputs = {
        "log": Path(log_path), "labels": Path(labels_path),
        "vocab": Path(vocab_path), "embeddings": Path(emb_path),
    }
    _write_report(out_path, stage, params, inputs, results)
    click.echo(
        f"{stage}: accuracy={report.accuracy:.2f} macro_f1={report.macro_f1:.4f} "
        f"over {len(ids)} examples"
    )


@cli.command("classify-intent")
@click.option("--log", "log_path", required=True)
@click.option("--model", "model_path", required=True)
@click.option("--vocab", "vocab_path", required=True)
@click.option("--embeddings", "emb_path", required=True)
@click.option("--ids", "ids_path", default=None, help="Only classify these ids; others become NotProduct.")
@click.option("--out", default=".", show_default=True)
def classify_intent_cmd(log_path, model_path, vocab_path, emb_path, ids_path, out):
    """Label every query with an intent, writing query_id<TAB>intent."""
    stage = "classify-intent"
    records = _load_log(stage, log_path)
    vocab = _load_vocab(stage, vocab_path)
    table = _load_table(stage, emb_path)
    try:
        model = TrainedModel.load(_require(stage, model_path))
    except ValueError as exc:
        raise _fail(stage, exc)
    if ids_path is not None:
        keep = set(_read_ids(stage, ids_path))
    else:
        keep = {record.query_id for record in records}
    targets = [record for record in records if record.query_id in keep]
    assignments: dict[str, str] = {
        record.query_id: IntentLabel.NOT_PRODUCT.value for record in records
    }
    if targets:
        _, rows = _feature_rows(stage, targets, vocab, table)
        try:
            names = model.predict_names(assemble_matrix(rows))
        except ValueError as exc:
            raise _fail(stage, exc)
        for record, name in zip(targets, names):
            assignments[record.query_id] = name
    out_path = _out_dir(out)
    labels_path = out_path / "intent_labels.tsv"
    write_truth(labels_path, assignments)
    counts: dict[str, int] = {}
    for name in assignments.values():
        counts[name] = counts.get(name, 0) + 1
    results = {
        "queries": len(assignments),
        "classified": len(targets),
        "label_counts": dict(sorted(counts.items())),
        "labels": labels_path.name,
    }
    inputs = {
        "log": Path(log_path), "model": Path(model_path),
        "vocab": Path(vocab_path), "embeddings": Path(emb_path),
    }
    if ids_path is not None:
        inputs["ids"] = Path(ids_path)
    _write_report(out_path, stage, {}, inputs, results)
    click.echo(f"{stage}: {len(assignments)} labels -> {labels_path}")


@cli.command()
@click.option("--log", "log_path", required=True)
@click.option("--labels", "labels_path", required=True)
@click.option("--out", default=".", show_default=True)
def analyze(log_path, labels_path, out):
    """Per-intent success, popularity, effort, and co-occurrence metrics."""
    stage = "analyze"
    records = _load_log(stage, log_path)
    labels = _load_labels(stage, labels_path)
    missing = [r.query_id for r in records if r.query_id not in labels]
    if missing:
        raise _fail(stage, f"no intent label for {missing[0]}")
    sessions = build_sessions(records)
    try:
        labeled = label_sessions(sessions, labels)
        report = compute_metrics(labeled)
    except ValueError as exc:
        raise _fail(stage, exc)
    out_path = _out_dir(out)
    metrics_json = out_path / "metrics.json"
    metrics_json.write_text(report.to_json() + "\n", "utf-8")
    metrics_csv = out_path / "metrics.csv"
    metrics_csv.write_text(report.to_csv(), "utf-8")
    results = {
        "sessions": len(sessions),
        "queries": len(records),
        "metrics_json": metrics_json.name,
        "metrics_csv": metrics_csv.name,
    }
    inputs = {"log": Path(log_path), "labels": Path(labels_path)}
    _write_report(out_path, stage, {}, inputs, results)
    click.echo(f"{stage}: metrics for {len(sessions)} sessions -> {metrics_json}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return exc.exit_code
    except click.exceptions.Abort:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
