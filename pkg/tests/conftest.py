from datetime import datetime, timezone

import pytest

from queryintent.logs import ClickEvent, QueryRecord

BASE_TS = datetime(2020, 3, 1, 12, 0, 0, tzinfo=timezone.utc)


def make_click(url="https://www.example.com/page", snippet="a snippet", dwell=12.0, order=1):
    return ClickEvent(url=url, snippet=snippet, dwell_seconds=dwell, order=order)


def make_record(
    query_id="q000001",
    session_id="s00001",
    query="blue widget",
    ads_shown=0,
    clicks=(),
    timestamp=BASE_TS,
):
    return QueryRecord(
        query_id=query_id,
        session_id=session_id,
        timestamp=timestamp,
        query=query,
        ads_shown=ads_shown,
        clicks=tuple(clicks),
    )


def record_with_dwells(query_id, dwells, session_id="s00001", **kwargs):
    """Record whose clicks carry the given dwell times in order."""
    clicks = tuple(
        make_click(url=f"https://www.site{i}.com/p", dwell=d, order=i + 1)
        for i, d in enumerate(dwells)
    )
    return make_record(query_id=query_id, session_id=session_id, clicks=clicks, **kwargs)


@pytest.fixture
def simple_record():
    return make_record(
        clicks=(make_click(),),
        ads_shown=1,
    )
