import datetime

import numpy as np
import pytest

from conftest import random_mdp, random_policy, toy_config, toy_space
from silic.diary import Trajectory, render_trajectory_diary
from silic.errors import (
    DivergenceError,
    InsufficientDataError,
    InvalidConfigError,
    InvalidGuidanceError,
    ProviderUnavailableError,
)
from silic.guidance import ScriptedGuidanceProvider
from silic.irl import (
    BatchTrainer,
    IRLTrainer,
    PersonData,
    TrainedModel,
    TrainingConfig,
    apply_update,
    expert_feature_expectation,
    expert_visitation,
    extract_policy,
    likelihood_gradient,
    maxent_gradient,
    mismatch_top_k,
    propagate_learner_visitation,
    q_values,
    soft_value_iteration,
    solve_policy,
    train_individual,
)
from silic.mdp import State, build_state_space
from silic.metrics import expert_policy
from silic.synth import (
    brute_force_feature_expectation,
    brute_force_visitation,
    generate_agent,
    sample_trajectories,
    trajectory_log_likelihood,
)

ORACLE_SPACES = [(2, 3, 2), (3, 4, 2), (2, 4, 3), (1, 4, 3), (2, 3, 3), (1, 2, 5)]


def rollout(mdp, policy, rng, n_days):
    r"""Sample days from ``mdp`` under ``policy``."""
    space = mdp.space
    matrices = (mdp.stay, mdp.travel)
    days = []
    for day in range(n_days):
        index = rng.choice(space.size, p=mdp.initial)
        states, actions = [], []
        for hour in range(space.n_hours):
            states.append(space.state(index))
            action = int(rng.random() < policy[index, 1])
            actions.append(action)
            if hour < space.n_hours - 1:
                row = matrices[action][index]
                index = rng.choice(row.indices, p=row.data / row.data.sum())
        days.append(
            Trajectory("toy", datetime.date(2017, 4, 3), tuple(states), tuple(actions))
        )
    return days


def test_config_validation():
    with pytest.raises(InvalidConfigError, match="finite hour-indexed horizon; got 1.5"):
        TrainingConfig(gamma=1.5)
    with pytest.raises(InvalidConfigError):
        TrainingConfig(gamma=-0.1)
    with pytest.raises(InvalidConfigError):
        TrainingConfig(top_k=0)
    with pytest.raises(InvalidConfigError):
        TrainingConfig.from_dict({"learning_rate": 1.0})
    with pytest.raises(InvalidConfigError):
        TrainingConfig(gradient="newton")
    with pytest.raises(InvalidConfigError):
        TrainingConfig(max_backtracks=-1)
    with pytest.raises(InvalidConfigError):
        TrainingConfig(l2=-0.5)
    assert TrainingConfig(gamma=1.0).gamma == 1.0
    assert TrainingConfig().sweep_budget == 2000
    assert TrainingConfig(max_sweeps=3).sweep_budget == 3
    assert TrainingConfig.from_dict(TrainingConfig().to_dict()) == TrainingConfig()


def test_horizon_must_match_space(space, rng):
    mdp = random_mdp(space, rng)
    with pytest.raises(InvalidConfigError):
        soft_value_iteration(np.zeros(space.n_features), mdp, TrainingConfig())


def test_final_hour_values(space, rng):
    mdp = random_mdp(space, rng)
    theta = rng.normal(size=space.n_features)
    value = soft_value_iteration(theta, mdp, toy_config(space, gamma=0.9))
    last = space.hour_block(space.n_hours - 1)
    np.testing.assert_allclose(value[last], mdp.rewards(theta)[last] + np.log(2.0))


def test_zero_discount_policy_is_uniform(space, rng):
    mdp = random_mdp(space, rng)
    policy = solve_policy(rng.normal(size=space.n_features), mdp, toy_config(space, gamma=0.0))
    np.testing.assert_allclose(policy, 0.5)


def test_policy_is_softmax_of_q(space, rng):
    mdp = random_mdp(space, rng)
    config = toy_config(space, gamma=0.95)
    theta = rng.normal(size=space.n_features)
    value = soft_value_iteration(theta, mdp, config)
    q = q_values(theta, value, mdp, config)
    policy = extract_policy(theta, value, mdp, config)
    np.testing.assert_allclose(
        np.log(policy[:, 1] / policy[:, 0]), q[:, 1] - q[:, 0], atol=1e-12
    )


def test_sweep_budget_exhaustion_raises(space, rng):
    mdp = random_mdp(space, rng)
    theta = np.ones(space.n_features)
    with pytest.raises(DivergenceError) as info:
        soft_value_iteration(theta, mdp, toy_config(space, max_sweeps=1))
    assert info.value.last_delta > 0


def test_non_finite_reward_raises(space, rng):
    mdp = random_mdp(space, rng)
    theta = np.zeros(space.n_features)
    theta[0] = np.inf
    with pytest.raises(DivergenceError):
        soft_value_iteration(theta, mdp, toy_config(space))


def test_policies_and_visitation_are_normalized():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        space = toy_space(
            n_max=int(rng.integers(1, 4)),
            n_hours=int(rng.integers(2, 5)),
            n_activities=int(rng.integers(1, 4)),
        )
        mdp = random_mdp(space, rng)
        config = toy_config(space, gamma=float(rng.uniform(0.5, 1.0)))
        policy = solve_policy(rng.uniform(-2, 2, size=space.n_features), mdp, config)
        np.testing.assert_allclose(policy.sum(axis=1), 1.0, atol=1e-12)
        visitation = propagate_learner_visitation(policy, mdp, config)
        np.testing.assert_allclose(visitation.per_step.sum(axis=1), 1.0, atol=1e-9)
        assert visitation.aggregate.sum() == pytest.approx(1.0, abs=1e-9)


def test_hour_weight_shift_leaves_policy_unchanged(rng):
    space = build_state_space()
    transition_rng = np.random.default_rng(3)
    mdp = random_mdp(space, transition_rng)
    config = TrainingConfig()
    theta = rng.uniform(-2, 2, size=space.n_features)
    shifted = theta.copy()
    shifted[space.n_activities : space.n_activities + space.n_hours] += 1.7
    np.testing.assert_allclose(
        solve_policy(shifted, mdp, config), solve_policy(theta, mdp, config), atol=1e-8, rtol=0
    )


@pytest.mark.parametrize("shape", ORACLE_SPACES)
def test_learner_visitation_matches_enumeration(shape):
    rng = np.random.default_rng(sum(shape))
    space = toy_space(*shape)
    mdp = random_mdp(space, rng)
    policy = random_policy(space, rng)
    visitation = propagate_learner_visitation(policy, mdp, toy_config(space))
    expected = brute_force_visitation(policy, mdp)
    np.testing.assert_allclose(visitation.aggregate, expected, atol=1e-10)
    np.testing.assert_allclose(
        visitation.aggregate @ space.features,
        brute_force_feature_expectation(policy, mdp),
        atol=1e-10,
    )


@pytest.mark.parametrize("shape", [(2, 3, 2), (3, 4, 2), (2, 4, 3), (1, 3, 3)])
def test_gradient_matches_finite_differences(shape):
    rng = np.random.default_rng(100 + sum(shape))
    space = toy_space(*shape)
    mdp = random_mdp(space, rng, deterministic=True)
    config = toy_config(space)
    days = rollout(mdp, random_policy(space, rng), rng, n_days=6)
    theta = rng.uniform(-1, 1, size=space.n_features)

    policy = solve_policy(theta, mdp, config)
    grad = maxent_gradient(days, propagate_learner_visitation(policy, mdp, config), space)

    step = 1e-5
    numeric = np.zeros_like(theta)
    for i in range(space.n_features):
        bump = np.zeros_like(theta)
        bump[i] = step
        numeric[i] = (
            trajectory_log_likelihood(theta + bump, days, mdp)
            - trajectory_log_likelihood(theta - bump, days, mdp)
        ) / (2 * step)
    np.testing.assert_allclose(grad, numeric, atol=1e-4, rtol=0)


def test_expert_visitation(space, rng):
    mdp = random_mdp(space, rng)
    days = rollout(mdp, random_policy(space, rng), rng, n_days=4)
    visitation = expert_visitation(days, space)
    assert visitation.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(
        expert_feature_expectation(days, space),
        np.mean([space.features[d.indices(space)].sum(axis=0) for d in days], axis=0)
        / space.n_hours,
    )
    with pytest.raises(InsufficientDataError):
        expert_visitation([], space)


def test_mismatch_ranking_breaks_ties_by_index(space):
    expert = np.zeros(space.size)
    learner = np.zeros(space.size)
    expert[[3, 7, 9]] = 0.2
    learner[5] = 0.4
    report = mismatch_top_k(expert, learner, 3, space)
    assert [space.index(entry.state) for entry in report] == [5, 3, 7]
    assert report[0].gap == pytest.approx(0.4)
    assert report[0].learner_mass == pytest.approx(0.4)
    assert len(mismatch_top_k(expert, learner, 100, space)) == space.size


def test_apply_update():
    config = TrainingConfig(alpha=2.0, lambda_llm=0.002)
    theta = np.zeros(3)
    updated = apply_update(theta, np.array([0.1, -0.2, 0.0]), np.array([1, 0, -1]), config)
    np.testing.assert_allclose(updated, [0.202, -0.4, -0.002])
    with pytest.raises(InvalidGuidanceError):
        apply_update(theta, np.zeros(3), np.array([2, 0, 0]), config)
    with pytest.raises(InvalidGuidanceError):
        apply_update(theta, np.zeros(3), np.array([1, 0]), config)


def test_update_is_not_clamped():
    config = TrainingConfig(alpha=1.0)
    updated = apply_update(np.full(2, 1.9), np.full(2, 0.5), np.zeros(2, dtype=int), config)
    np.testing.assert_allclose(updated, 2.4)


@pytest.fixture
def toy_agent():
    space = toy_space(n_max=2, n_hours=3, n_activities=2)
    config = toy_config(space)
    agent = generate_agent(5, config, space)
    return agent, sample_trajectories(agent, 30, 5), config


def test_gradient_ascent_reduces_kl(toy_agent):
    agent, days, config = toy_agent
    config = toy_config(agent.space, alpha=0.1, max_iters=200, guided_init=False)
    model = IRLTrainer(None, config).train(days, agent.mdp, person_id=agent.person_id)
    assert model.iterations == len(model.history)
    assert model.final_kl < model.history[0]["kl"]
    assert model.convergence_reason in ("kl", "theta-delta", "max-iters", "no-descent")
    assert model.person_id == "synth-5"
    record = model.history[0]
    assert set(record) == {
        "person_id",
        "iter",
        "theta",
        "grad_norm",
        "kl",
        "l1",
        "top_k_states",
        "directions",
        "step_scale",
        "provider_latency_ms",
    }
    assert record["theta"] == [0.0] * agent.space.n_features
    assert record["provider_latency_ms"] is None


def test_zero_iterations_returns_initial_point(toy_agent):
    agent, days, config = toy_agent
    config = toy_config(agent.space, max_iters=0)
    model = IRLTrainer(None, config).train(days, agent.mdp)
    assert model.iterations == 0
    assert model.convergence_reason == "max-iters"
    np.testing.assert_array_equal(model.theta, np.zeros(agent.space.n_features))


def test_zero_step_converges_on_theta_delta(toy_agent):
    agent, days, _ = toy_agent
    config = toy_config(agent.space, alpha=0.0, lambda_llm=0.0)
    model = IRLTrainer(None, config).train(days, agent.mdp)
    assert model.convergence_reason == "theta-delta"
    assert model.iterations == 1


class FlakyProvider(object):
    def initialize(self, diary_text, person_id=None):
        raise ProviderUnavailableError("down")

    def suggest_directions(self, theta, report, person_id=None):
        return np.ones(len(theta), dtype=int)


def test_provider_outage_falls_back_to_zeros(toy_agent):
    agent, days, _ = toy_agent
    config = toy_config(agent.space, max_iters=2, alpha=0.0, max_backtracks=0)
    model = IRLTrainer(FlakyProvider(), config).train(days, agent.mdp)
    assert model.incidents == ["init: down"]
    np.testing.assert_array_equal(model.initial_theta, np.zeros(agent.space.n_features))
    np.testing.assert_allclose(model.theta, 2 * config.lambda_llm)
    assert model.history[1]["directions"] == [1] * agent.space.n_features


def test_trainer_rejects_empty_and_mismatched_input(toy_agent):
    agent, days, config = toy_agent
    with pytest.raises(InsufficientDataError):
        IRLTrainer(None, config).train([], agent.mdp)
    with pytest.raises(InvalidConfigError):
        IRLTrainer(None, TrainingConfig()).train(days, agent.mdp)


def test_trained_model_serialization(toy_agent):
    agent, days, config = toy_agent
    model = IRLTrainer(None, toy_config(agent.space, max_iters=3)).train(days, agent.mdp, "p1")
    doc = model.to_dict()
    assert list(doc) == ["person_id", "theta", "iterations", "final_kl", "convergence_reason"]
    restored = TrainedModel.from_dict(doc)
    np.testing.assert_array_equal(restored.theta, model.theta)
    assert restored.policy is None
    assert restored.iterations == model.iterations


def test_batch_trainer_isolates_failures(toy_agent):
    agent, days, _ = toy_agent
    config = toy_config(agent.space, max_iters=2)
    persons = {
        "b": PersonData(days, agent.mdp),
        "a": PersonData(days[:5], agent.dynamics),
        "broken": PersonData([], agent.mdp),
    }
    result = BatchTrainer(None, config, concurrency=2).train(persons)
    assert [model.person_id for model in result.models] == ["a", "b"]
    assert list(result.failures) == ["broken"]
    assert result.failures["broken"].kind == "insufficient-data"


def test_trajectory_on_other_space_is_rejected(toy_agent):
    agent, days, config = toy_agent
    bad = Trajectory("p", days[0].day, (State(0, 0, True, 1),) * 3, (0, 0, 0))
    with pytest.raises(InvalidConfigError):
        IRLTrainer(None, config).train([bad], agent.mdp)


def test_train_individual_with_scripted_guidance(toy_agent):
    agent, days, _ = toy_agent
    config = toy_config(agent.space, max_iters=3, alpha=0.1)
    provider = ScriptedGuidanceProvider(agent.space)
    model = train_individual(days, agent.mdp, provider, config, person_id="p1")

    expected = provider.initial_weights(render_trajectory_diary(days, agent.space))
    np.testing.assert_allclose(model.initial_theta, expected)
    assert model.incidents == []
    assert all(record["provider_latency_ms"] is not None for record in model.history)
    again = train_individual(days, agent.mdp, provider, config, person_id="p1")
    np.testing.assert_array_equal(again.theta, model.theta)


def action_log_likelihood(theta, days, mdp, config):
    space = mdp.space
    policy = solve_policy(theta, mdp, config)
    weights = expert_visitation(days, space)[:, None] * expert_policy(days, space)
    return float(np.sum(weights * np.log(policy)))


def likelihood_gradient_at(theta, days, mdp, config):
    space = mdp.space
    policy = solve_policy(theta, mdp, config)
    return likelihood_gradient(
        policy, expert_visitation(days, space), expert_policy(days, space), mdp, config
    )


@pytest.mark.parametrize("shape", [(2, 3, 2), (3, 4, 2), (2, 4, 3)])
def test_likelihood_gradient_matches_finite_differences(shape):
    rng = np.random.default_rng(200 + sum(shape))
    space = toy_space(*shape)
    mdp = random_mdp(space, rng)
    config = toy_config(space, gamma=0.9)
    days = rollout(mdp, random_policy(space, rng), rng, n_days=6)
    theta = rng.uniform(-1, 1, size=space.n_features)

    grad = likelihood_gradient_at(theta, days, mdp, config)
    step = 1e-5
    numeric = np.zeros_like(theta)
    for i in range(space.n_features):
        bump = np.zeros_like(theta)
        bump[i] = step
        numeric[i] = (
            action_log_likelihood(theta + bump, days, mdp, config)
            - action_log_likelihood(theta - bump, days, mdp, config)
        ) / (2 * step)
    np.testing.assert_allclose(grad, numeric, atol=1e-7, rtol=0)


def test_gradients_agree_on_deterministic_undiscounted_days():
    rng = np.random.default_rng(31)
    space = toy_space(2, 4, 3)
    mdp = random_mdp(space, rng, deterministic=True)
    config = toy_config(space)
    days = rollout(mdp, random_policy(space, rng), rng, n_days=8)
    theta = rng.uniform(-1, 1, size=space.n_features)

    policy = solve_policy(theta, mdp, config)
    visitation = maxent_gradient(days, propagate_learner_visitation(policy, mdp, config), space)
    np.testing.assert_allclose(
        likelihood_gradient_at(theta, days, mdp, config), visitation, atol=1e-10
    )


def test_backtracking_keeps_training_kl_non_increasing(toy_agent):
    agent, days, _ = toy_agent
    provider = ScriptedGuidanceProvider(agent.space)
    for gradient in ("visitation", "likelihood"):
        config = toy_config(agent.space, alpha=50.0, max_iters=40, gradient=gradient)
        model = IRLTrainer(provider, config).train(days, agent.mdp)
        kls = [record["kl"] for record in model.history] + [model.final_kl]
        assert all(later <= earlier for earlier, later in zip(kls, kls[1:]))
        assert all(0.0 <= record["step_scale"] <= 1.0 for record in model.history)
        assert any(record["step_scale"] < 1.0 for record in model.history)


class AdverseProvider(object):
    r"""Points every update against the likelihood gradient."""

    def __init__(self, days, mdp, config):
        self.days, self.mdp, self.config = days, mdp, config

    def initialize(self, diary_text, person_id=None):
        return None

    def suggest_directions(self, theta, report, person_id=None):
        grad = likelihood_gradient_at(theta, self.days, self.mdp, self.config)
        return -np.sign(grad).astype(int)


def test_training_stops_when_no_step_lowers_kl():
    rng = np.random.default_rng(41)
    space = toy_space(2, 4, 2)
    mdp = random_mdp(space, rng, deterministic=True)
    days = rollout(mdp, random_policy(space, rng), rng, n_days=10)
    config = toy_config(
        space, alpha=0.0, lambda_llm=0.5, max_backtracks=3, gradient="likelihood"
    )

    model = IRLTrainer(AdverseProvider(days, mdp, config), config).train(days, mdp)
    assert model.convergence_reason == "no-descent"
    assert model.iterations == 1
    assert model.history[0]["step_scale"] == 0.0
    np.testing.assert_array_equal(model.theta, np.zeros(space.n_features))
    assert model.final_kl == model.history[0]["kl"]


def test_l2_penalty_is_part_of_the_descent_objective(toy_agent):
    agent, days, _ = toy_agent
    settings = dict(max_iters=60, guided_init=False, gradient="likelihood")
    free = IRLTrainer(None, toy_config(agent.space, **settings)).train(days, agent.mdp)
    tied = IRLTrainer(None, toy_config(agent.space, l2=5.0, **settings)).train(days, agent.mdp)

    thetas = [np.array(record["theta"]) for record in tied.history] + [tied.theta]
    kls = [record["kl"] for record in tied.history] + [tied.final_kl]
    objective = [kl + 2.5 * theta @ theta for kl, theta in zip(kls, thetas)]
    assert all(later <= earlier + 1e-12 for earlier, later in zip(objective, objective[1:]))
    assert np.linalg.norm(tied.theta) < np.linalg.norm(free.theta)
