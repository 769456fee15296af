from typing import NamedTuple

import numpy as np

from ..errors import InvalidConfigError
from .names import N_ACTIVITIES, N_HOURS, N_MAX, activity_names, feature_names


class State(NamedTuple):
    hour: int
    activity: int
    is_first: bool
    count: int


class StateSpace(object):
    r"""Dense enumeration of the [h, a, f, n] states.

    Index layout is hour-major: ((h * A + a) * 2 + f) * N_max + (n - 1), so the
    states of one hour occupy a contiguous block of ``block_size`` indices.
    """

    def __init__(self, n_max=N_MAX, n_hours=N_HOURS, n_activities=N_ACTIVITIES):
        for name, value in (
            ("n_max", n_max),
            ("n_hours", n_hours),
            ("n_activities", n_activities),
        ):
            if int(value) != value or value < 1:
                raise InvalidConfigError(
                    "{} must be a positive integer, got {!r}".format(name, value)
                )

        self.n_max = int(n_max)
        self.n_hours = int(n_hours)
        self.n_activities = int(n_activities)

        self.block_size = self.n_activities * 2 * self.n_max
        self.size = self.n_hours * self.block_size
        self.n_features = self.n_activities + self.n_hours + 2

        idx = np.arange(self.size)
        self.counts = idx % self.n_max + 1
        rest = idx // self.n_max
        self.is_first = (rest % 2).astype(bool)
        rest = rest // 2
        self.activities = rest % self.n_activities
        self.hours = rest // self.n_activities

        self._features = None

    def __len__(self):
        return self.size

    def __iter__(self):
        for i in range(self.size):
            yield self.state(i)

    def __eq__(self, other):
        return isinstance(other, StateSpace) and self.shape == other.shape

    def __hash__(self):
        return hash(self.shape)

    def __repr__(self):
        return "StateSpace(n_max={}, n_hours={}, n_activities={})".format(*self.shape)

    @property
    def shape(self):
        return (self.n_max, self.n_hours, self.n_activities)

    @property
    def activity_names(self):
        return activity_names(self.n_activities)

    @property
    def feature_names(self):
        return feature_names(self.n_hours, self.n_activities)

    def validate(self, state):
        hour, activity, is_first, count = state
        if not 0 <= hour < self.n_hours:
            raise InvalidConfigError("hour {} outside [0, {})".format(hour, self.n_hours))
        if not 0 <= activity < self.n_activities:
            raise InvalidConfigError(
                "activity {} outside [0, {})".format(activity, self.n_activities)
            )
        if not 1 <= count <= self.n_max:
            raise InvalidConfigError("count {} outside [1, {}]".format(count, self.n_max))
        return state

    def index(self, state):
        hour, activity, is_first, count = self.validate(state)
        return (
            (int(hour) * self.n_activities + int(activity)) * 2 + int(bool(is_first))
        ) * self.n_max + (int(count) - 1)

    def state(self, index):
        if not 0 <= index < self.size:
            raise InvalidConfigError("state index {} outside [0, {})".format(index, self.size))
        return State(
            int(self.hours[index]),
            int(self.activities[index]),
            bool(self.is_first[index]),
            int(self.counts[index]),
        )

    def hour_block(self, hour):
        return slice(hour * self.block_size, (hour + 1) * self.block_size)

    @property
    def features(self):
        r"""|S| x n_features matrix; row i is featurize(state(i))."""
        if self._features is None:
            features = np.zeros((self.size, self.n_features))
            rows = np.arange(self.size)
            features[rows, self.activities] = 1.0
            features[rows, self.n_activities + self.hours] = 1.0
            features[:, -2] = self.is_first
            features[:, -1] = self.counts / self.n_max
            features.setflags(write=False)
            self._features = features
        return self._features


def build_state_space(n_max=N_MAX, n_hours=N_HOURS, n_activities=N_ACTIVITIES):
    return StateSpace(n_max=n_max, n_hours=n_hours, n_activities=n_activities)
