from collections import Counter, defaultdict
from typing import NamedTuple

import numpy as np
import pandas as pd
from scipy.stats import entropy

from ..diary.names import (
    ERRAND_LABELS,
    ESCORT_LABELS,
    SCHOOL_LABELS,
    SHOPPING_LABELS,
    SOCIAL_LABELS,
    WORK_LABELS,
)
from ..diary.utils import diary_to_trajectories, group_by_person
from ..errors import InsufficientDataError
from ..mdp.names import N_MAX, ActivityCategory
from .names import FEATURE_COLUMNS


class MobilityFeatures(NamedTuple):
    trip_distance: float
    std_trip_distance: float
    num_trips_per_day: float
    std_num_trips_per_day: float
    destination_entropy: float
    pct_work_trips: float
    pct_school_trips: float
    pct_shopping_trips: float
    pct_social_recreation_trips: float
    pct_errand_trips: float
    pct_escort_trips: float
    travel_time: float
    std_travel_time: float
    first_departure_time: float
    last_departure_time: float
    home_time: float
    work_time: float


def _mean_std(values):
    r"""Mean and population standard deviation; NaN when nothing was recorded."""
    if not values:
        return float("nan"), float("nan")
    values = np.asarray(values, dtype=float)
    return float(values.mean()), float(values.std())


def extract_features(records, n_max=N_MAX):
    r"""Mobility features of one person's trip records.

    Distance and travel-time features only average trips that report them.
    Purpose shares use raw labels; home and work time come from the hourly
    trajectories.
    """
    if not records:
        raise InsufficientDataError("no trips to extract features from")

    by_day = defaultdict(list)
    for record in records:
        by_day[record.day].append(record)
    n_trips = len(records)
    labels = Counter(record.raw_activity for record in records)

    def pct(label_set):
        return 100.0 * sum(labels[label] for label in label_set) / n_trips

    trip_distance = _mean_std([r.distance_miles for r in records if r.distance_miles is not None])
    travel_time = _mean_std([r.travel_minutes for r in records if r.travel_minutes is not None])
    trips_per_day = _mean_std([len(trips) for trips in by_day.values()])

    trajectories = diary_to_trajectories(records, n_max)
    occupied = np.array([[s.activity for s in t.states] for t in trajectories])

    return MobilityFeatures(
        trip_distance=trip_distance[0],
        std_trip_distance=trip_distance[1],
        num_trips_per_day=trips_per_day[0],
        std_num_trips_per_day=trips_per_day[1],
        destination_entropy=float(entropy(list(labels.values()))),
        pct_work_trips=pct(WORK_LABELS),
        pct_school_trips=pct(SCHOOL_LABELS),
        pct_shopping_trips=pct(SHOPPING_LABELS),
        pct_social_recreation_trips=pct(SOCIAL_LABELS),
        pct_errand_trips=pct(ERRAND_LABELS),
        pct_escort_trips=pct(ESCORT_LABELS),
        travel_time=travel_time[0],
        std_travel_time=travel_time[1],
        first_departure_time=float(
            np.mean([min(r.depart_minute for r in trips) / 60.0 for trips in by_day.values()])
        ),
        last_departure_time=float(
            np.mean([max(r.depart_minute for r in trips) / 60.0 for trips in by_day.values()])
        ),
        home_time=float((occupied == ActivityCategory.Home).sum(axis=1).mean()),
        work_time=float((occupied == ActivityCategory.Work).sum(axis=1).mean()),
    )


def build_feature_matrix(records, contexts=None, n_max=N_MAX):
    r"""One row per person: person_id, mobility features, then context columns if given."""
    rows = []
    for person_id, person_records in group_by_person(records).items():
        row = {"person_id": person_id}
        row.update(extract_features(person_records, n_max)._asdict())
        if contexts is not None and person_id in contexts:
            row.update(contexts[person_id].to_dict())
        rows.append(row)
    frame = pd.DataFrame(rows)
    if frame.empty:
        frame = pd.DataFrame(columns=["person_id"] + FEATURE_COLUMNS)
    return frame
