import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from logzero import logger

from ..diary.utils import render_trajectory_diary
from ..errors import InsufficientDataError, InvalidGuidanceError, ProviderUnavailableError
from ..mdp.TabularMDP import TabularMDP
from ..metrics.policy import expert_policy, kl_policy_divergence, l1_policy_distance
from .planning import likelihood_gradient, solve_policy
from .TrainingConfig import LIKELIHOOD, TrainingConfig
from .visitation import (
    expert_visitation,
    maxent_gradient,
    mismatch_top_k,
    propagate_learner_visitation,
)

THETA_DELTA, KL, MAX_ITERS, NO_DESCENT = "theta-delta", "kl", "max-iters", "no-descent"


@dataclass(eq=False)
class TrainedModel(object):
    person_id: Optional[str]
    theta: np.ndarray
    policy: np.ndarray
    iterations: int
    final_kl: float
    convergence_reason: str
    final_l1: float = float("nan")
    initial_theta: Optional[np.ndarray] = None
    history: List[dict] = field(default_factory=list)
    incidents: List[str] = field(default_factory=list)

    def to_dict(self):
        return {
            "person_id": self.person_id,
            "theta": [float(v) for v in self.theta],
            "iterations": self.iterations,
            "final_kl": self.final_kl,
            "convergence_reason": self.convergence_reason,
        }

    @classmethod
    def from_dict(cls, doc):
        r"""Reload a saved model; the policy is not stored and comes back as None."""
        return cls(
            person_id=doc["person_id"],
            theta=np.array(doc["theta"], dtype=float),
            policy=None,
            iterations=int(doc["iterations"]),
            final_kl=float(doc["final_kl"]),
            convergence_reason=doc["convergence_reason"],
        )


def apply_update(theta, grad, directions, config, scale=1.0):
    r"""theta + scale * (alpha * grad + lambda_llm * directions), unclamped."""
    directions = np.asarray(directions)
    if directions.shape != np.shape(theta) or not np.isin(directions, (-1, 0, 1)).all():
        raise InvalidGuidanceError("directions must be {} entries in {{-1, 0, 1}}".format(
            np.size(theta)
        ))
    return np.asarray(theta, dtype=float) + scale * (
        config.alpha * np.asarray(grad) + config.lambda_llm * directions
    )


class IRLTrainer(object):
    r"""Guided maximum-entropy IRL for one person at a time.

    The trainer holds no per-person state, so one instance can serve many
    worker threads as long as the provider is shareable.
    """

    def __init__(self, provider=None, config=None):
        self.provider = provider
        self.config = config or TrainingConfig()

    def train(self, trajectories, dynamics, person_id=None, diary_text=None):
        if not trajectories:
            raise InsufficientDataError("no trajectories for {}".format(person_id))
        mdp = dynamics if isinstance(dynamics, TabularMDP) else TabularMDP.from_dynamics(dynamics)
        config = self.config
        config.check_space(mdp.space)
        space = mdp.space
        for trajectory in trajectories:
            trajectory.validate(space)

        incidents = []
        theta = self._initial_theta(trajectories, space, person_id, diary_text, incidents)
        initial_theta = theta.copy()

        expert = expert_visitation(trajectories, space)
        pi_expert = expert_policy(trajectories, space)

        def evaluate(theta):
            policy = solve_policy(theta, mdp, config)
            learner = propagate_learner_visitation(policy, mdp, config)
            kl = kl_policy_divergence(pi_expert, policy, expert)
            l1 = l1_policy_distance(pi_expert, policy, space)
            return policy, learner, kl, l1

        def gradient(theta, policy, learner):
            if config.gradient == LIKELIHOOD:
                grad = likelihood_gradient(policy, expert, pi_expert, mdp, config)
            else:
                grad = maxent_gradient(trajectories, learner, space)
            return grad - config.l2 * theta

        history = []
        reason = MAX_ITERS
        iterations = 0
        scale = 1.0
        policy, learner, kl, l1 = evaluate(theta)
        for iteration in range(config.max_iters):
            if kl < config.eps_converge:
                reason = KL
                break

            report = mismatch_top_k(expert, learner, config.top_k, space)
            grad = gradient(theta, policy, learner)
            directions, latency_ms = self._directions(theta, report, person_id, incidents)
            accepted, scale = self._line_search(
                theta, grad, directions, self._objective(theta, kl), evaluate, min(1.0, 2 * scale)
            )

            history.append(
                {
                    "person_id": person_id,
                    "iter": iteration,
                    "theta": [float(v) for v in theta],
                    "grad_norm": float(np.linalg.norm(grad)),
                    "kl": kl,
                    "l1": l1,
                    "top_k_states": [list(map(int, entry.state)) for entry in report],
                    "directions": [int(v) for v in directions],
                    "step_scale": scale if accepted else 0.0,
                    "provider_latency_ms": latency_ms,
                }
            )
            iterations = iteration + 1
            if accepted is None:
                logger.info("person %s: no descent step at iteration %d", person_id, iteration)
                reason = NO_DESCENT
                break

            updated, (policy, learner, kl, l1) = accepted
            delta = np.abs(updated - theta).max()
            theta = updated
            if delta < config.eps_converge:
                reason = THETA_DELTA
                break
        else:
            if config.max_iters and kl < config.eps_converge:
                reason = KL

        logger.info(
            "person %s: %s after %d iterations, kl %.6f", person_id, reason, iterations, kl
        )
        return TrainedModel(
            person_id=person_id,
            theta=theta,
            policy=policy,
            iterations=iterations,
            final_kl=kl,
            convergence_reason=reason,
            final_l1=l1,
            initial_theta=initial_theta,
            history=history,
            incidents=incidents,
        )

    def _objective(self, theta, kl):
        return kl + 0.5 * self.config.l2 * float(np.dot(theta, theta))

    def _line_search(self, theta, grad, directions, objective, evaluate, scale):
        r"""Halve the step until the penalized training KL does not rise.

        Returns ((theta, evaluation), scale) for the accepted step, or
        (None, scale) once ``max_backtracks`` halvings all failed. With
        ``max_backtracks`` 0 the full step is always taken.
        """
        if self.config.max_backtracks == 0:
            scale = 1.0
        for trial in range(self.config.max_backtracks + 1):
            updated = apply_update(theta, grad, directions, self.config, scale=scale)
            evaluation = evaluate(updated)
            if self.config.max_backtracks == 0:
                return (updated, evaluation), scale
            if self._objective(updated, evaluation[2]) <= objective:
                return (updated, evaluation), scale
            if trial < self.config.max_backtracks:
                scale /= 2.0
        return None, scale

    def _initial_theta(self, trajectories, space, person_id, diary_text, incidents):
        zeros = np.zeros(space.n_features)
        if self.provider is None or not self.config.guided_init:
            return zeros
        if diary_text is None:
            diary_text = render_trajectory_diary(trajectories, space)
        try:
            theta = self.provider.initialize(diary_text, person_id=person_id)
        except ProviderUnavailableError as exception:
            incidents.append("init: {}".format(exception))
            logger.warning("person %s: initialization unavailable, using zeros", person_id)
            return zeros
        return zeros if theta is None else np.asarray(theta, dtype=float)

    def _directions(self, theta, report, person_id, incidents):
        zeros = np.zeros(len(theta), dtype=int)
        if self.provider is None or not self.config.guided_updates:
            return zeros, None
        start = time.perf_counter()
        try:
            directions = self.provider.suggest_directions(theta, report, person_id=person_id)
        except ProviderUnavailableError as exception:
            incidents.append("update: {}".format(exception))
            logger.warning("person %s: no update directions, gradient-only step", person_id)
            directions = zeros
        return directions, round(1000.0 * (time.perf_counter() - start), 3)


def train_individual(trajectories, dynamics, provider, config, person_id=None, diary_text=None):
    return IRLTrainer(provider, config).train(trajectories, dynamics, person_id, diary_text)
