import datetime
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Dict

import numpy as np
from logzero import logger

from ..errors import InsufficientDataError, PreconditionError, UnmappedActivityError
from ..mdp.names import N_ACTIVITIES, N_HOURS, N_MAX, Action, ActivityCategory
from ..mdp.StateSpace import State
from ..mdp.TransitionModel import TransitionModel
from .names import ACTIVITY_MAP, TRANSITION_SMOOTHING
from .Trajectory import Trajectory

DIARY_LINE_REGEX = re.compile(r"^Day (\d+), (\d{2}):(\d{2}): depart to (.+)$")
NO_TRIPS_REGEX = re.compile(r"^Day (\d+): no trips$")


@dataclass(frozen=True, eq=False)
class EmpiricalDynamics(object):
    transition: TransitionModel
    initial_distribution: Dict[State, float]


def map_activity(raw_activity):
    category = ACTIVITY_MAP.get(raw_activity.strip())
    if category is None:
        raise UnmappedActivityError(
            "unmapped activity label {!r}".format(raw_activity), label=raw_activity
        )
    return category


def resolve_activity(label):
    r"""Category names as rendered for synthetic days, else a raw purpose label."""
    label = label.strip()
    if label in ActivityCategory.__members__:
        return ActivityCategory[label]
    return map_activity(label)


def filter_participants(records):
    kept = [
        record
        for record in records
        if record.is_representative and record.survey_complete and record.day.weekday() < 5
    ]
    days = defaultdict(set)
    for record in kept:
        days[record.person_id].add(record.day)
    return [record for record in kept if len(days[record.person_id]) >= 2]


def group_by_person(records):
    grouped = defaultdict(list)
    for record in records:
        grouped[record.person_id].append(record)
    return {
        person_id: sorted(grouped[person_id], key=lambda r: (r.day, r.depart_minute))
        for person_id in sorted(grouped)
    }


def build_day(start_activity, destinations, n_max, n_hours=N_HOURS):
    r"""Apply the hourly construction rule.

    ``destinations`` maps an hour to the destination category of the last trip
    departing in it. Returns (states, actions).
    """
    activity, is_first, count = int(start_activity), True, 1
    states, actions = [], []
    for hour in range(n_hours):
        states.append(State(hour, activity, is_first, count))
        if hour in destinations:
            actions.append(int(Action.Travel))
            activity = int(destinations[hour])
            is_first = False
            count = min(count + 1, n_max)
        else:
            actions.append(int(Action.Stay))
    return tuple(states), tuple(actions)


def diary_to_trajectories(records, n_max=N_MAX, days=None, n_hours=N_HOURS):
    r"""Convert one person's trip records into daily trajectories.

    ``days`` may list survey days without trips; those are skipped with a warning.
    """
    person_ids = {record.person_id for record in records}
    if len(person_ids) > 1:
        raise PreconditionError("records span several persons: {}".format(sorted(person_ids)))

    by_day = defaultdict(list)
    for record in records:
        by_day[record.day].append(record)

    person_id = next(iter(person_ids), None)
    for day in sorted(set(days or ()) - set(by_day)):
        logger.warning("person %s has no trips on %s, day skipped", person_id, day)

    trajectories = []
    for day in sorted(by_day):
        trips = sorted(by_day[day], key=lambda r: r.depart_minute)
        start = ActivityCategory.Home
        if trips[0].first_activity:
            start = map_activity(trips[0].first_activity)

        destinations = {}
        for trip in trips:
            destinations[trip.depart_minute // 60] = map_activity(trip.raw_activity)

        states, actions = build_day(start, destinations, n_max, n_hours)
        trajectories.append(Trajectory(person_id, day, states, actions))
    return trajectories


def estimate_empirical_dynamics(trajectories, n_max=N_MAX, n_activities=N_ACTIVITIES):
    if not trajectories:
        raise InsufficientDataError("no trajectories to estimate dynamics from")

    n_hours = len(trajectories[0])
    counts = np.zeros((n_activities, n_activities))
    starts = Counter()
    for trajectory in trajectories:
        starts[trajectory.states[0]] += 1
        for t in range(len(trajectory) - 1):
            if trajectory.actions[t] == Action.Travel:
                counts[trajectory.states[t].activity, trajectory.states[t + 1].activity] += 1

    totals = counts.sum(axis=1, keepdims=True)
    smoothed = (counts + TRANSITION_SMOOTHING) / (totals + n_activities * TRANSITION_SMOOTHING)
    matrix = np.where(totals > 0, smoothed, 1.0 / n_activities)

    n_days = sum(starts.values())
    initial = {state: count / n_days for state, count in sorted(starts.items())}
    return EmpiricalDynamics(TransitionModel(matrix, n_max, n_hours), initial)


def dynamics_to_dict(dynamics):
    return {
        "activity_matrix": dynamics.transition.activity_matrix.tolist(),
        "n_max": dynamics.transition.n_max,
        "n_hours": dynamics.transition.n_hours,
        "initial_distribution": [
            [state.hour, state.activity, int(state.is_first), state.count, mass]
            for state, mass in dynamics.initial_distribution.items()
        ],
    }


def dynamics_from_dict(doc):
    transition = TransitionModel(np.array(doc["activity_matrix"]), doc["n_max"], doc["n_hours"])
    initial = {
        State(int(h), int(a), bool(f), int(n)): float(mass)
        for h, a, f, n, mass in doc["initial_distribution"]
    }
    return EmpiricalDynamics(transition, initial)


def render_diary_text(records):
    r"""Canonical diary rendering: one line per trip, days numbered from 1."""
    records = sorted(records, key=lambda r: (r.day, r.depart_minute))
    day_numbers = {day: i for i, day in enumerate(sorted({r.day for r in records}), start=1)}
    return "\n".join(
        "Day {}, {:02d}:{:02d}: depart to {}".format(
            day_numbers[r.day], r.depart_minute // 60, r.depart_minute % 60, r.raw_activity
        )
        for r in records
    )


def render_trajectory_diary(trajectories, space):
    r"""Diary text for trajectories without trip records (synthetic agents)."""
    names = space.activity_names
    lines = []
    for day, trajectory in enumerate(trajectories, start=1):
        trips = [
            "Day {}, {:02d}:00: depart to {}".format(
                day, t, names[trajectory.states[t + 1].activity]
            )
            for t in range(len(trajectory) - 1)
            if trajectory.actions[t] == Action.Travel
        ]
        lines.extend(trips or ["Day {}: no trips".format(day)])
    return "\n".join(lines)


def parse_diary_text(text):
    r"""Inverse of the renderers: {day number: [(depart_minute, label), ...]}."""
    days = defaultdict(list)
    for line in text.splitlines():
        idle = NO_TRIPS_REGEX.match(line.strip())
        if idle:
            days.setdefault(int(idle.group(1)), [])
            continue
        match = DIARY_LINE_REGEX.match(line.strip())
        if match:
            day, hours, minutes, label = match.groups()
            days[int(day)].append((int(hours) * 60 + int(minutes), label.strip()))
    return dict(days)


def diary_occupancy(text, n_max=N_MAX, n_hours=N_HOURS):
    r"""Hourly states reconstructed from canonical diary text, Home-anchored."""
    days = []
    for day, trips in sorted(parse_diary_text(text).items()):
        destinations = {}
        for minute, label in sorted(trips):
            destinations[minute // 60] = resolve_activity(label)
        states, _ = build_day(ActivityCategory.Home, destinations, n_max, n_hours)
        days.append(states)
    return days


def synthetic_day(offset):
    return datetime.date(2017, 4, 3) + datetime.timedelta(days=offset)
