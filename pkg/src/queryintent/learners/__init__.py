from queryintent.learners._base import ClassifierBase, Standardizer
from queryintent.learners.boosting import AdaBoostClassifier
from queryintent.learners.evaluation import (
    Dataset,
    EvaluationReport,
    cross_validate,
    evaluate,
    stratified_kfold,
)
from queryintent.learners.io import KINDS, TrainedModel, canonical_kind, make_classifier, train
from queryintent.learners.linear import LinearSVMClassifier, LogisticRegressionClassifier
from queryintent.learners.mlp import MLPClassifier
from queryintent.learners.neighbors import KNNClassifier
from queryintent.learners.svm import RbfSVMClassifier
from queryintent.learners.trees import DecisionTreeClassifier, RandomForestClassifier

__all__ = [
    "ClassifierBase",
    "Standardizer",
    "AdaBoostClassifier",
    "Dataset",
    "EvaluationReport",
    "cross_validate",
    "evaluate",
    "stratified_kfold",
    "KINDS",
    "TrainedModel",
    "canonical_kind",
    "make_classifier",
    "train",
    "LinearSVMClassifier",
    "LogisticRegressionClassifier",
    "MLPClassifier",
    "KNNClassifier",
    "RbfSVMClassifier",
    "DecisionTreeClassifier",
    "RandomForestClassifier",
]
