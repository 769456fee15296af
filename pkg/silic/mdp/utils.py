import numpy as np

from .names import N_ACTIVITIES, N_HOURS


def featurize(state, n_max, n_hours=N_HOURS, n_activities=N_ACTIVITIES):
    r"""Activity one-hot, hour one-hot, is_first, count / n_max."""
    hour, activity, is_first, count = state
    phi = np.zeros(n_activities + n_hours + 2)
    phi[int(activity)] = 1.0
    phi[n_activities + int(hour)] = 1.0
    phi[-2] = float(bool(is_first))
    phi[-1] = count / n_max
    return phi


def reward(theta, state, n_max, n_hours=N_HOURS, n_activities=N_ACTIVITIES):
    theta = np.asarray(theta, dtype=float)
    return float(theta @ featurize(state, n_max, n_hours, n_activities))


def rewards(theta, space):
    r"""R(s) for every state of ``space`` as one vector."""
    return space.features @ np.asarray(theta, dtype=float)
