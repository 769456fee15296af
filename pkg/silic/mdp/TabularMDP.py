import numpy as np
from scipy import sparse

from ..errors import InvalidConfigError
from .StateSpace import StateSpace
from .utils import rewards


class TabularMDP(object):
    r"""Sparse matrix view of (StateSpace, TransitionModel, initial distribution).

    ``stay`` and ``travel`` are |S| x |S| row-stochastic matrices whose rows for
    final-hour states are empty. ``initial`` is a dense vector over states.
    """

    def __init__(self, space, transition, initial_distribution):
        if transition.n_activities != space.n_activities:
            raise InvalidConfigError(
                "transition covers {} activities, space has {}".format(
                    transition.n_activities, space.n_activities
                )
            )
        if transition.n_max != space.n_max or transition.n_hours != space.n_hours:
            raise InvalidConfigError("transition model and state space disagree on shape")

        self.space = space
        self.transition = transition
        self.initial = self._initial_vector(space, initial_distribution)
        self.stay, self.travel = self._build_matrices(space, transition)
        self.stay_t = self.stay.T.tocsr()
        self.travel_t = self.travel.T.tocsr()

        blocks = [space.hour_block(hour) for hour in range(space.n_hours)]
        self._stay_blocks = [self.stay[block] for block in blocks]
        self._travel_blocks = [self.travel[block] for block in blocks]

    @staticmethod
    def _initial_vector(space, initial_distribution):
        if isinstance(initial_distribution, dict):
            initial = np.zeros(space.size)
            for state, mass in initial_distribution.items():
                initial[space.index(state)] += mass
        else:
            initial = np.asarray(initial_distribution, dtype=float).copy()
        if initial.shape != (space.size,) or (initial < 0).any():
            raise InvalidConfigError("initial distribution must be a nonnegative |S| vector")
        if abs(initial.sum() - 1.0) > 1e-9:
            raise InvalidConfigError("initial distribution sums to {}".format(initial.sum()))
        return initial

    @staticmethod
    def _build_matrices(space, transition):
        source = np.flatnonzero(space.hours < space.n_hours - 1)
        hours = space.hours[source] + 1
        activities = space.activities[source]
        is_first = space.is_first[source].astype(int)
        counts = space.counts[source]

        def index(h, a, f, n):
            return ((h * space.n_activities + a) * 2 + f) * space.n_max + (n - 1)

        stay = sparse.csr_matrix(
            (np.ones(source.size), (source, index(hours, activities, is_first, counts))),
            shape=(space.size, space.size),
        )

        next_counts = np.minimum(counts + 1, space.n_max)
        rows, cols, data = [], [], []
        for next_activity in range(space.n_activities):
            mass = transition.activity_matrix[activities, next_activity]
            keep = mass > 0
            rows.append(source[keep])
            cols.append(index(hours[keep], next_activity, 0, next_counts[keep]))
            data.append(mass[keep])
        travel = sparse.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(space.size, space.size),
        )
        return stay, travel

    @property
    def size(self):
        return self.space.size

    def rewards(self, theta):
        return rewards(theta, self.space)

    def continuation(self, value, hour):
        r"""Expected next-state value per action for the states of ``hour``; |block| x 2."""
        return np.column_stack(self.next_expectations(value, hour))

    def next_expectations(self, values, hour):
        r"""(E[values(s') | s, Stay], E[values(s') | s, Travel]) for the states of ``hour``.

        ``values`` may be a vector or an |S| x k matrix.
        """
        return self._stay_blocks[hour] @ values, self._travel_blocks[hour] @ values

    def expected_next_values(self, value):
        return np.column_stack((self.stay @ value, self.travel @ value))

    def step(self, occupancy, policy):
        r"""Push one step of occupancy mass through ``policy`` and the dynamics."""
        return self.stay_t @ (occupancy * policy[:, 0]) + self.travel_t @ (
            occupancy * policy[:, 1]
        )

    @classmethod
    def from_dynamics(cls, dynamics, n_activities=None):
        r"""Build from anything carrying ``transition`` and ``initial_distribution``."""
        transition = dynamics.transition
        space = StateSpace(
            n_max=transition.n_max,
            n_hours=transition.n_hours,
            n_activities=n_activities or transition.n_activities,
        )
        return cls(space, transition, dynamics.initial_distribution)
