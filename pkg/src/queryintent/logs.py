"""Query-log data model: records, clicks, sessions, and the line-delimited log format.

A log file holds one JSON object per line (UTF-8) with keys ``query_id``,
``session_id``, ``timestamp`` (ISO-8601 UTC), ``query``, ``ads_shown`` and
``clicks``. Parsing is line-tolerant: malformed lines are collected as
per-line errors instead of aborting the whole file.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator, Union


@dataclass(frozen=True)
class ClickEvent:
    """One clicked result: landing url, snippet shown, dwell and click position."""

    url: str
    snippet: str
    dwell_seconds: float
    order: int


@dataclass(frozen=True)
class QueryRecord:
    """One search event with its clicks, in canonical form (clicks sorted by order)."""

    query_id: str
    session_id: str
    timestamp: datetime
    query: str
    ads_shown: int
    clicks: tuple[ClickEvent, ...] = ()

    @property
    def last_click(self) -> ClickEvent | None:
        return self.clicks[-1] if self.clicks else None

    @property
    def total_dwell(self) -> float:
        return sum(c.dwell_seconds for c in self.clicks)


@dataclass(frozen=True)
class Session:
    """Time-ordered queries sharing one session id."""

    session_id: str
    records: tuple[QueryRecord, ...]


@dataclass
class ParseError:
    line_number: int
    message: str


@dataclass
class ParseResult:
    records: list[QueryRecord] = field(default_factory=list)
    errors: list[ParseError] = field(default_factory=list)


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 instant; naive values are taken as UTC."""
    if not isinstance(value, str):
        raise ValueError("timestamp must be a string")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    ts = ts.astimezone(timezone.utc)
    if ts.microsecond:
        return ts.strftime("%Y-%m-%dT%H:%M:%S.%f") + "Z"
    return ts.strftime("%Y-%m-%dT%H:%M:%SZ")


def _build_click(obj: dict) -> ClickEvent:
    if not isinstance(obj, dict):
        raise ValueError("click must be an object")
    for key in ("url", "order"):
        if key not in obj:
            raise ValueError(f"click missing field '{key}'")
    dwell = float(obj.get("dwell_seconds", 0.0))
    if dwell < 0:
        raise ValueError("negative dwell")
    order = obj["order"]
    if not isinstance(order, int) or isinstance(order, bool) or order < 1:
        raise ValueError("click order must be an integer >= 1")
    return ClickEvent(
        url=str(obj["url"]),
        snippet=str(obj.get("snippet", "")),
        dwell_seconds=dwell,
        order=order,
    )


def record_from_dict(obj: dict) -> QueryRecord:
    """Validate one raw log object and return its canonical QueryRecord."""
    if not isinstance(obj, dict):
        raise ValueError("record must be an object")
    for key in ("query_id", "session_id", "timestamp", "query"):
        if key not in obj:
            raise ValueError(f"missing field '{key}'")
    query = str(obj["query"])
    if not query.strip():
        raise ValueError("empty query")
    ads = obj.get("ads_shown", 0)
    if not isinstance(ads, int) or isinstance(ads, bool) or ads < 0:
        raise ValueError("ads_shown must be a non-negative integer")
    raw_clicks = obj.get("clicks", [])
    if not isinstance(raw_clicks, list):
        raise ValueError("clicks must be an array")
    clicks = sorted((_build_click(c) for c in raw_clicks), key=lambda c: c.order)
    orders = [c.order for c in clicks]
    if orders != list(range(1, len(orders) + 1)):
        raise ValueError("click orders must be unique and contiguous from 1")
    return QueryRecord(
        query_id=str(obj["query_id"]),
        session_id=str(obj["session_id"]),
        timestamp=parse_timestamp(obj["timestamp"]),
        query=query,
        ads_shown=ads,
        clicks=tuple(clicks),
    )


def record_to_dict(record: QueryRecord) -> dict:
    return {
        "query_id": record.query_id,
        "session_id": record.session_id,
        "timestamp": format_timestamp(record.timestamp),
        "query": record.query,
        "ads_shown": record.ads_shown,
        "clicks": [
            {
                "url": c.url,
                "snippet": c.snippet,
                "dwell_seconds": c.dwell_seconds,
                "order": c.order,
            }
            for c in record.clicks
        ],
    }


def record_to_line(record: QueryRecord) -> str:
    return json.dumps(record_to_dict(record), ensure_ascii=False, separators=(",", ":"))


LogSource = Union[str, bytes, Path, io.IOBase, Iterable[str]]


def _iter_lines(source: LogSource) -> Iterator[str]:
    if isinstance(source, Path):
        with source.open("r", encoding="utf-8") as fh:
            yield from fh
        return
    if isinstance(source, bytes):
        yield from io.StringIO(source.decode("utf-8"))
        return
    if isinstance(source, str):
        yield from io.StringIO(source)
        return
    if isinstance(source, io.RawIOBase) or isinstance(source, io.BufferedIOBase):
        yield from io.TextIOWrapper(source, encoding="utf-8")
        return
    yield from source


def parse_log(source: LogSource) -> ParseResult:
    """Parse a line-delimited log; keeps valid records, reports bad lines by number.

    ``source`` may be a Path, raw str/bytes content, an open file, or any
    iterable of lines. Blank lines are skipped.
    """
    result = ParseResult()
    for lineno, line in enumerate(_iter_lines(source), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            result.errors.append(ParseError(lineno, f"invalid JSON: {exc.msg}"))
            continue
        try:
            result.records.append(record_from_dict(obj))
        except ValueError as exc:
            result.errors.append(ParseError(lineno, str(exc)))
    return result


def load_records(path: Union[str, Path]) -> list[QueryRecord]:
    """Parse a log file and raise if any line is invalid."""
    result = parse_log(Path(path))
    if result.errors:
        first = result.errors[0]
        raise ValueError(
            f"{path}: {len(result.errors)} invalid line(s); "
            f"first at line {first.line_number}: {first.message}"
        )
    return result.records


def write_records(records: Iterable[QueryRecord], path: Union[str, Path]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record_to_line(record) + "\n")


def build_sessions(records: Iterable[QueryRecord]) -> list[Session]:
    """Group records by session id, ordered by (timestamp, query_id) within a session.

    Sessions come out sorted by their first timestamp (session id breaks ties),
    so the result is independent of the input permutation.
    """
    by_session: dict[str, list[QueryRecord]] = {}
    for record in records:
        by_session.setdefault(record.session_id, []).append(record)
    sessions = []
    for session_id, group in by_session.items():
        group.sort(key=lambda r: (r.timestamp, r.query_id))
        sessions.append(Session(session_id=session_id, records=tuple(group)))
    sessions.sort(key=lambda s: (s.records[0].timestamp, s.session_id))
    return sessions
