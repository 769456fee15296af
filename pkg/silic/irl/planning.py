import numpy as np
from logzero import logger
from scipy.special import logsumexp, softmax

from ..errors import DivergenceError

LOG_2 = np.log(2.0)


def soft_value_iteration(theta, mdp, config):
    r"""Soft Bellman backup V(s) = R(s) + log sum_a exp(gamma E[V(s') | s, a]).

    Final-hour states have no successor, so V = R + log 2 there. Sweeps run
    over hour blocks from last to first; since every successor lies in the
    next hour, a sweep already propagates the whole horizon and the loop stops
    once max |dV| < eps_value.
    """
    config.check_space(mdp.space)
    space = mdp.space
    reward = mdp.rewards(theta)
    if not np.isfinite(reward).all():
        raise DivergenceError("reward is not finite", last_delta=float("nan"))

    value = np.zeros(space.size)
    last = space.hour_block(space.n_hours - 1)
    delta = np.inf
    for sweep in range(1, config.sweep_budget + 1):
        updated = reward[last] + LOG_2
        delta = np.abs(updated - value[last]).max()
        value[last] = updated

        for hour in reversed(range(space.n_hours - 1)):
            block = space.hour_block(hour)
            updated = reward[block] + logsumexp(
                config.gamma * mdp.continuation(value, hour), axis=1
            )
            delta = max(delta, np.abs(updated - value[block]).max())
            value[block] = updated

        if not np.isfinite(value).all():
            raise DivergenceError(
                "value became non-finite at sweep {}".format(sweep), last_delta=float(delta)
            )
        if delta < config.eps_value:
            logger.debug("soft value iteration converged after %d sweeps", sweep)
            return value

    raise DivergenceError(
        "no convergence within {} sweeps, last delta {:.3g}".format(config.sweep_budget, delta),
        last_delta=float(delta),
    )


def q_values(theta, value, mdp, config):
    r"""Q(s, a) = R(s) + gamma E[V(s') | s, a]; |S| x 2 with columns (Stay, Travel)."""
    reward = mdp.rewards(theta)
    return reward[:, None] + config.gamma * mdp.expected_next_values(value)


def extract_policy(theta, value, mdp, config):
    return softmax(q_values(theta, value, mdp, config), axis=1)


def solve_policy(theta, mdp, config):
    value = soft_value_iteration(theta, mdp, config)
    return extract_policy(theta, value, mdp, config)


def likelihood_gradient(policy, expert, pi_expert, mdp, config):
    r"""Gradient of sum_s D_e(s) sum_a pi_e(a|s) log pi(a|s) at the soft-optimal ``policy``.

    Works backwards over the hours with successor features
    psi(s) = phi(s) + gamma sum_a pi(a|s) E[psi(s') | s, a], which is dV/dtheta.
    Then d log pi(a|s) = gamma (E[psi(s') | s, a] - sum_b pi(b|s) E[psi(s') | s, b]).
    Final-hour actions are uniform and contribute nothing.
    """
    space = mdp.space
    features = space.features
    psi = np.zeros((space.size, space.n_features))
    last = space.hour_block(space.n_hours - 1)
    psi[last] = features[last]

    grad = np.zeros(space.n_features)
    for hour in reversed(range(space.n_hours - 1)):
        block = space.hour_block(hour)
        stay, travel = mdp.next_expectations(psi, hour)
        pi = policy[block]
        psi[block] = features[block] + config.gamma * (pi[:, :1] * stay + pi[:, 1:] * travel)
        weight = expert[block, None] * (pi_expert[block] - pi)
        grad += config.gamma * (weight[:, :1] * stay + weight[:, 1:] * travel).sum(axis=0)
    return grad
