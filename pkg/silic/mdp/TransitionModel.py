from dataclasses import dataclass

import numpy as np

from ..errors import InvalidConfigError, TerminalStateError
from .names import N_HOURS, Action
from .StateSpace import State

ROW_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class TransitionModel(object):
    r"""Activity-to-activity probabilities used when Travel is taken.

    Stay is deterministic and needs no parameters.
    """

    activity_matrix: np.ndarray
    n_max: int
    n_hours: int = N_HOURS

    def __post_init__(self):
        matrix = np.array(self.activity_matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidConfigError("activity matrix must be square, got {}".format(matrix.shape))
        if (matrix < 0).any():
            raise InvalidConfigError("activity matrix has negative entries")
        row_sums = matrix.sum(axis=1)
        if np.abs(row_sums - 1.0).max() > ROW_TOLERANCE:
            raise InvalidConfigError("activity matrix rows must sum to 1, got {}".format(row_sums))
        if self.n_max < 1:
            raise InvalidConfigError("n_max must be >= 1")
        matrix.setflags(write=False)
        object.__setattr__(self, "activity_matrix", matrix)

    @property
    def n_activities(self):
        return self.activity_matrix.shape[0]

    def transition_distribution(self, state, action):
        hour, activity, is_first, count = state
        if hour >= self.n_hours - 1:
            raise TerminalStateError("hour {} has no successor".format(hour))

        if Action(action) == Action.Stay:
            return {State(hour + 1, activity, is_first, count): 1.0}

        next_count = min(count + 1, self.n_max)
        return {
            State(hour + 1, next_activity, False, next_count): float(mass)
            for next_activity, mass in enumerate(self.activity_matrix[activity])
            if mass > 0
        }


def transition_distribution(state, action, model):
    return model.transition_distribution(state, action)
