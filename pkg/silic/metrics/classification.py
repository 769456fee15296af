from dataclasses import dataclass
from typing import List

import numpy as np
from logzero import logger
from sklearn import metrics

from ..errors import InvalidLabelError, PreconditionError


@dataclass(frozen=True, eq=False)
class ClassificationReport(object):
    classes: List[str]
    confusion_matrix: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    accuracy: float
    accuracy_tp_tn: float
    weighted_f1: float

    @property
    def n_samples(self):
        return int(self.support.sum())

    def to_dict(self):
        return {
            "per_class": [
                {
                    "label": label,
                    "precision": float(self.precision[c]),
                    "recall": float(self.recall[c]),
                    "f1": float(self.f1[c]),
                    "support": int(self.support[c]),
                }
                for c, label in enumerate(self.classes)
            ],
            "accuracy": self.accuracy,
            "accuracy_tp_tn": self.accuracy_tp_tn,
            "weighted_f1": self.weighted_f1,
            "n_samples": self.n_samples,
            "confusion_matrix": self.confusion_matrix.tolist(),
        }


def f1_from_precision_recall(precision, recall):
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _check_labels(labels, n_classes, name):
    labels = np.asarray(labels)
    if labels.size and not np.issubdtype(labels.dtype, np.integer):
        raise InvalidLabelError("{} labels must be integers".format(name))
    bad = labels[(labels < 0) | (labels >= n_classes)]
    if bad.size:
        raise InvalidLabelError(
            "{} label {} outside [0, {})".format(name, bad[0], n_classes), label=int(bad[0])
        )
    return labels.astype(int)


def classification_report(truth, pred, classes):
    r"""Per-class precision/recall/F1 (0 when a denominator is 0), accuracy and weighted F1.

    ``accuracy`` is correct / N. ``accuracy_tp_tn`` sums TP_c + TN_c over
    classes and divides by C * N; both agree on binary tasks.
    """
    classes = list(classes)
    n_classes = len(classes)
    if len(truth) != len(pred):
        raise PreconditionError(
            "truth has {} labels, pred has {}".format(len(truth), len(pred))
        )
    truth = _check_labels(truth, n_classes, "truth")
    pred = _check_labels(pred, n_classes, "predicted")
    labels = list(range(n_classes))

    n = len(truth)
    if n == 0:
        logger.warning("classification report on an empty sample")
        zeros = np.zeros(n_classes)
        return ClassificationReport(
            classes, np.zeros((n_classes, n_classes), dtype=int), zeros, zeros, zeros,
            zeros.astype(int), 0.0, 0.0, 0.0,
        )

    confusion = metrics.confusion_matrix(truth, pred, labels=labels)
    precision, recall, f1, support = metrics.precision_recall_fscore_support(
        truth, pred, labels=labels, zero_division=0
    )

    tp = np.diag(confusion)
    fp = confusion.sum(axis=0) - tp
    fn = confusion.sum(axis=1) - tp
    tn = n - tp - fp - fn

    return ClassificationReport(
        classes=classes,
        confusion_matrix=confusion,
        precision=precision,
        recall=recall,
        f1=f1,
        support=support,
        accuracy=float(tp.sum() / n),
        accuracy_tp_tn=float((tp + tn).sum() / (tp + tn + fp + fn).sum()),
        weighted_f1=float(np.dot(support / n, f1)),
    )
