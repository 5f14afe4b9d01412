from queryintent.annotation.agreement import (
    AgreementReport,
    CATEGORY_LABELS,
    LABEL_CHOICES,
    SKIP,
    agreement_from_events,
    consensus_labels,
    fleiss_kappa,
)
from queryintent.annotation.store import AnnotationItem, AnnotationQueue, LabelEvent, LabelStore
from queryintent.annotation.server import create_app

__all__ = [
    "AgreementReport",
    "CATEGORY_LABELS",
    "LABEL_CHOICES",
    "SKIP",
    "agreement_from_events",
    "consensus_labels",
    "fleiss_kappa",
    "AnnotationItem",
    "AnnotationQueue",
    "LabelEvent",
    "LabelStore",
    "create_app",
]
