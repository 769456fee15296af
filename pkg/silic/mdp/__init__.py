from .names import (
    N_ACTIVITIES,
    N_HOURS,
    N_MAX,
    Action,
    ActivityCategory,
    activity_names,
    feature_names,
)
from .StateSpace import State, StateSpace, build_state_space
from .TransitionModel import TransitionModel, transition_distribution
from .TabularMDP import TabularMDP
from .utils import featurize, reward, rewards
