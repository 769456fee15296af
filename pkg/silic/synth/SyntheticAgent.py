from dataclasses import dataclass

import numpy as np

from ..diary.Trajectory import Trajectory
from ..diary.utils import EmpiricalDynamics, synthetic_day
from ..guidance.names import WEIGHT_BOUND
from ..irl.planning import solve_policy
from ..irl.visitation import propagate_learner_visitation
from ..mdp.names import Action, ActivityCategory
from ..mdp.StateSpace import State, build_state_space
from ..mdp.TabularMDP import TabularMDP
from ..mdp.TransitionModel import TransitionModel
from ..metrics.policy import kl_policy_divergence
from ..utils import make_rng


@dataclass(frozen=True, eq=False)
class SyntheticAgent(object):
    r"""Ground-truth reward weights with the soft-optimal policy they induce."""

    theta_star: np.ndarray
    dynamics: EmpiricalDynamics
    policy_star: np.ndarray
    seed: int
    mdp: TabularMDP

    @property
    def space(self):
        return self.mdp.space

    @property
    def person_id(self):
        return "synth-{}".format(self.seed)

    def occupancy(self, config):
        r"""Aggregate state visitation of the true policy."""
        return propagate_learner_visitation(self.policy_star, self.mdp, config).aggregate

    def recovery_kl(self, theta, config):
        r"""KL(pi* || pi_theta) weighted by the occupancy of pi*."""
        policy = solve_policy(theta, self.mdp, config)
        return kl_policy_divergence(self.policy_star, policy, self.occupancy(config))


def generate_agent(seed, config, space=None):
    space = space or build_state_space()
    rng = make_rng(seed, "agent")

    theta_star = rng.uniform(-WEIGHT_BOUND, WEIGHT_BOUND, size=space.n_features)
    matrix = rng.dirichlet(np.ones(space.n_activities), size=space.n_activities)
    transition = TransitionModel(matrix, space.n_max, space.n_hours)
    initial = {State(0, int(ActivityCategory.Home), True, 1): 1.0}

    mdp = TabularMDP(space, transition, initial)
    policy_star = solve_policy(theta_star, mdp, config)
    return SyntheticAgent(
        theta_star=theta_star,
        dynamics=EmpiricalDynamics(transition, initial),
        policy_star=policy_star,
        seed=seed,
        mdp=mdp,
    )


def sample_trajectories(agent, n_days, seed):
    r"""Roll out ``n_days`` days; an action is sampled at every hour, the last included."""
    space, mdp = agent.space, agent.mdp
    rng = make_rng(seed, "rollout")
    matrices = (mdp.stay, mdp.travel)

    trajectories = []
    for day in range(n_days):
        index = rng.choice(space.size, p=mdp.initial)
        states, actions = [], []
        for hour in range(space.n_hours):
            states.append(space.state(index))
            action = int(rng.random() < agent.policy_star[index, Action.Travel])
            actions.append(action)
            if hour < space.n_hours - 1:
                row = matrices[action][index]
                index = int(rng.choice(row.indices, p=row.data / row.data.sum()))
        trajectories.append(
            Trajectory(agent.person_id, synthetic_day(day), tuple(states), tuple(actions))
        )
    return trajectories
