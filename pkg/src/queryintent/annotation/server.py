"""HTTP service exposing the annotation queue, store, and agreement math."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from queryintent.annotation.agreement import (
    LABEL_CHOICES,
    agreement_from_events,
    consensus_labels,
)
from queryintent.annotation.store import AnnotationQueue, LabelStore


class LabelSubmission(BaseModel):
    annotator: str
    query_id: str
    label: str


def create_app(
    queue: AnnotationQueue,
    store: LabelStore,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="annotation service")

    @app.get("/api/labels/choices")
    def label_choices() -> dict:
        return {"labels": list(LABEL_CHOICES)}

    @app.get("/api/items/next")
    def next_item(annotator: str) -> dict:
        try:
            item = queue.next_item(annotator)
        except KeyError as exc:
            raise HTTPException(status_code=400, detail=str(exc.args[0]))
        progress = queue.progress()
        mine = progress["annotators"][annotator]
        if item is None:
            return {"item": None, "remaining": 0, "labeled": mine["labeled"]}
        remaining = mine["total"] - mine["labeled"]
        return {"item": item.to_dict(), "remaining": remaining, "labeled": mine["labeled"]}

    @app.get("/api/items/{query_id}")
    def get_item(query_id: str) -> dict:
        try:
            item = queue.get_item(query_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc.args[0]))
        return {
            "item": item.to_dict(),
            "status": queue.item_status(query_id),
            "labels": store.labels_for(query_id),
        }

    @app.post("/api/labels")
    def submit_label(body: LabelSubmission) -> dict:
        try:
            queue.submit(body.annotator, body.query_id, body.label)
        except KeyError as exc:
            detail = str(exc.args[0])
            code = 404 if detail.startswith("unknown item") else 400
            raise HTTPException(status_code=code, detail=detail)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"ok": True, "status": queue.item_status(body.query_id)}

    @app.get("/api/progress")
    def progress() -> dict:
        return queue.progress()

    @app.get("/api/agreement")
    def agreement() -> dict:
        report = agreement_from_events(store.labels_by_item(), queue.annotators)
        payload = report.as_dict()
        payload["consensus"] = consensus_labels(store.labels_by_item())
        return payload

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
