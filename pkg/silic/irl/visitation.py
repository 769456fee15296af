from typing import NamedTuple

import numpy as np

from ..errors import InsufficientDataError
from ..mdp.StateSpace import State


class Visitation(NamedTuple):
    per_step: np.ndarray
    aggregate: np.ndarray


class Mismatch(NamedTuple):
    state: State
    expert_mass: float
    learner_mass: float
    gap: float


def _state_counts(trajectories, space):
    if not trajectories:
        raise InsufficientDataError("no expert trajectories")
    counts = np.zeros(space.size)
    for trajectory in trajectories:
        np.add.at(counts, trajectory.indices(space), 1.0)
    return counts


def expert_visitation(trajectories, space):
    r"""Empirical state frequencies, normalized by n_hours * n_days."""
    counts = _state_counts(trajectories, space)
    return counts / (space.n_hours * len(trajectories))


def expert_feature_expectation(trajectories, space):
    r"""Per-step averaged feature sums over the expert days."""
    return expert_visitation(trajectories, space) @ space.features


def propagate_learner_visitation(policy, mdp, config):
    config.check_space(mdp.space)
    per_step = np.zeros((config.horizon, mdp.size))
    per_step[0] = mdp.initial
    for t in range(config.horizon - 1):
        per_step[t + 1] = mdp.step(per_step[t], policy)
    return Visitation(per_step, per_step.mean(axis=0))


def mismatch_top_k(expert, learner, k, space):
    r"""States ranked by |D_e - D_l|, ties by ascending index, at most ``k`` of them."""
    if isinstance(learner, Visitation):
        learner = learner.aggregate
    gaps = np.abs(expert - learner)
    order = np.argsort(-gaps, kind="stable")[:k]
    return [
        Mismatch(space.state(i), float(expert[i]), float(learner[i]), float(gaps[i]))
        for i in order
    ]


def maxent_gradient(trajectories, learner, space):
    r"""Expert minus learner feature expectation, both on the per-step scale.

    The expert term sums features per trajectory and averages over days, then
    divides by the horizon so it is comparable with the per-step learner mean.
    """
    if isinstance(learner, Visitation):
        learner = learner.aggregate
    return expert_feature_expectation(trajectories, space) - learner @ space.features
