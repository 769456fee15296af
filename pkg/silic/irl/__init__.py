from .BatchTrainer import BatchResult, BatchTrainer, PersonData
from .IRLTrainer import IRLTrainer, TrainedModel, apply_update, train_individual
from .planning import (
    extract_policy,
    likelihood_gradient,
    q_values,
    soft_value_iteration,
    solve_policy,
)
from .TrainingConfig import TrainingConfig
from .visitation import (
    Mismatch,
    Visitation,
    expert_feature_expectation,
    expert_visitation,
    maxent_gradient,
    mismatch_top_k,
    propagate_learner_visitation,
)
