import numpy as np
from scipy.special import logsumexp

from ..errors import OracleTooLargeError

ENUMERATION_BUDGET = 10 ** 6


def enumerate_trajectories(policy, mdp, initial=None, budget=ENUMERATION_BUDGET):
    r"""Every (probability, state indices, actions) path of the horizon with nonzero mass.

    The final hour's action is part of the path, so probabilities sum to 1.
    """
    initial = mdp.initial if initial is None else np.asarray(initial, dtype=float)
    n_hours = mdp.space.n_hours
    matrices = (mdp.stay, mdp.travel)

    paths = []
    stack = [(float(initial[i]), [int(i)], []) for i in np.flatnonzero(initial)[::-1]]
    while stack:
        probability, states, actions = stack.pop()
        index = states[-1]
        for action in (0, 1):
            mass = probability * policy[index, action]
            if mass == 0:
                continue
            if len(states) == n_hours:
                paths.append((mass, states, actions + [action]))
                if len(paths) > budget:
                    raise OracleTooLargeError(
                        "more than {} trajectories to enumerate".format(budget)
                    )
                continue
            row = matrices[action][index]
            for successor, p in zip(row.indices, row.data):
                stack.append((mass * p, states + [int(successor)], actions + [action]))
    return paths


def brute_force_visitation(policy, mdp, budget=ENUMERATION_BUDGET):
    r"""Aggregate visitation (per-step mean) by exhaustive enumeration."""
    aggregate = np.zeros(mdp.size)
    n_hours = mdp.space.n_hours
    for probability, states, _ in enumerate_trajectories(policy, mdp, budget=budget):
        np.add.at(aggregate, states, probability / n_hours)
    return aggregate


def brute_force_feature_expectation(policy, mdp, budget=ENUMERATION_BUDGET):
    r"""E[(1 / H) sum_t phi(s_t)] under ``policy``, enumerated exactly."""
    return brute_force_visitation(policy, mdp, budget) @ mdp.space.features


def log_partition(theta, mdp, start, budget=ENUMERATION_BUDGET):
    r"""log sum over action sequences from ``start`` of T(path) exp(sum_t R(s_t))."""
    reward = mdp.rewards(theta)
    n_hours = mdp.space.n_hours
    initial = np.zeros(mdp.size)
    initial[start] = 1.0
    uniform = np.full((mdp.size, 2), 0.5)
    paths = enumerate_trajectories(uniform, mdp, initial, budget)
    return logsumexp(
        [np.log(p) + n_hours * np.log(2.0) + reward[states].sum() for p, states, _ in paths]
    )


def trajectory_log_likelihood(theta, trajectories, mdp, budget=ENUMERATION_BUDGET):
    r"""Maximum-entropy log-likelihood per day and per step.

    Exact for deterministic dynamics, where it equals the soft value iteration
    model with gamma = 1; its gradient is then the per-step feature matching gap.
    """
    space = mdp.space
    reward = mdp.rewards(theta)
    partitions = {}
    total = 0.0
    for trajectory in trajectories:
        indices = trajectory.indices(space)
        if indices[0] not in partitions:
            partitions[indices[0]] = log_partition(theta, mdp, indices[0], budget)
        total += reward[indices].sum() - partitions[indices[0]]
    return total / (len(trajectories) * space.n_hours)
