"""Query-log mining toolkit: weak labeling, classification, topic sampling,
annotation agreement, and session intent analytics."""

__version__ = "0.1.0"

from queryintent.analysis import IntentLabel, MetricsReport, compute_metrics
from queryintent.logs import ClickEvent, QueryRecord, Session, load_records, parse_log
from queryintent.weaklabel import (
    HeuristicKind,
    ResourceLists,
    apply_heuristic,
    build_weak_set,
    evaluate_heuristics,
)

__all__ = [
    "__version__",
    "IntentLabel",
    "MetricsReport",
    "compute_metrics",
    "ClickEvent",
    "QueryRecord",
    "Session",
    "load_records",
    "parse_log",
    "HeuristicKind",
    "ResourceLists",
    "apply_heuristic",
    "build_weak_set",
    "evaluate_heuristics",
]
