import numpy as np
import pandas as pd

from ..ccr.names import HOUSING_TYPES
from ..errors import InvalidLabelsError, PreconditionError
from .names import DEFAULT_PERCENTILE, DEFAULT_TRAIN_FRACTION


def anova_f_scores(features, labels):
    r"""One-way ANOVA F per feature column.

    F = (SSB / (C - 1)) / (SSW / (N - C)). A constant feature scores 0; a
    feature that separates classes with no within-class spread scores +inf.
    """
    frame = pd.DataFrame(features)
    values = frame.to_numpy(dtype=float)
    labels = np.asarray(labels)
    if len(labels) != len(values):
        raise PreconditionError("{} labels for {} rows".format(len(labels), len(values)))
    if np.isnan(values).any():
        raise PreconditionError("features contain NaN; impute before scoring")

    classes = np.unique(labels)
    if len(classes) < 2:
        raise InvalidLabelsError("ANOVA needs at least 2 classes, got {}".format(len(classes)))

    n, n_classes = len(values), len(classes)
    grand_mean = values.mean(axis=0)
    ssb = np.zeros(values.shape[1])
    ssw = np.zeros(values.shape[1])
    for label in classes:
        group = values[labels == label]
        group_mean = group.mean(axis=0)
        ssb += len(group) * (group_mean - grand_mean) ** 2
        ssw += ((group - group_mean) ** 2).sum(axis=0)

    with np.errstate(divide="ignore", invalid="ignore"):
        scores = (ssb / (n_classes - 1)) / (ssw / (n - n_classes))
    scores = np.where(ssw > 0, scores, np.where(ssb > 0, np.inf, 0.0))
    scores[np.ptp(values, axis=0) == 0] = 0.0
    return pd.Series(scores, index=frame.columns, name="f_score")


def selection_threshold(scores, percentile=DEFAULT_PERCENTILE):
    finite = np.nan_to_num(np.asarray(scores, dtype=float), posinf=np.finfo(float).max)
    return float(np.percentile(finite, percentile))


def select_top_features(scores, percentile=DEFAULT_PERCENTILE):
    r"""Names scoring strictly above the percentile (linear interpolation), in input order."""
    scores = pd.Series(scores)
    if scores.empty:
        raise PreconditionError("no scores to select from")
    finite = np.nan_to_num(scores.to_numpy(dtype=float), posinf=np.finfo(float).max)
    threshold = selection_threshold(scores, percentile)
    return [name for name, value in zip(scores.index, finite) if value > threshold]


def encode_housing(frame):
    r"""Replace the categorical housing_type column with one indicator per type."""
    if "housing_type" not in frame.columns:
        return frame
    encoded = frame.drop(columns="housing_type")
    for housing_type in HOUSING_TYPES:
        encoded["housing_type_" + housing_type] = (frame["housing_type"] == housing_type).astype(
            float
        )
    return encoded


def split_persons(person_ids, rng, train_fraction=DEFAULT_TRAIN_FRACTION):
    r"""Seeded person-level split; returns (train, test) sorted id lists."""
    person_ids = sorted(person_ids)
    order = rng.permutation(len(person_ids))
    n_train = int(round(train_fraction * len(person_ids)))
    train = sorted(person_ids[i] for i in order[:n_train])
    test = sorted(person_ids[i] for i in order[n_train:])
    return train, test
