import numpy as np
from scipy.special import rel_entr

PROBABILITY_FLOOR = 1e-6


def expert_policy(trajectories, space):
    r"""Action frequencies per visited state; unvisited states get (0.5, 0.5)."""
    counts = np.zeros((space.size, 2))
    for trajectory in trajectories:
        np.add.at(counts, (trajectory.indices(space), list(trajectory.actions)), 1.0)
    totals = counts.sum(axis=1, keepdims=True)
    return np.divide(counts, totals, out=np.full_like(counts, 0.5), where=totals > 0)


def floor_policy(policy, floor=PROBABILITY_FLOOR):
    floored = np.maximum(policy, floor)
    return floored / floored.sum(axis=1, keepdims=True)


def kl_policy_divergence(expert_policy, learner_policy, expert_visitation):
    r"""sum_s D_e(s) KL(pi_e(.|s) || pi_l(.|s)) with the learner floored at 1e-6."""
    per_state = rel_entr(expert_policy, floor_policy(learner_policy)).sum(axis=1)
    return float(np.dot(expert_visitation, per_state))


def l1_policy_distance(expert_policy, learner_policy, state_space=None):
    r"""Mean over states of sum_a |pi_e(a|s) - pi_l(a|s)|."""
    n_states = len(state_space) if state_space is not None else len(expert_policy)
    return float(np.abs(expert_policy - learner_policy).sum() / n_states)
