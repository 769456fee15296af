from .oracle import (
    brute_force_feature_expectation,
    brute_force_visitation,
    enumerate_trajectories,
    log_partition,
    trajectory_log_likelihood,
)
from .SyntheticAgent import SyntheticAgent, generate_agent, sample_trajectories
