import numpy as np
import pytest

from silic.irl import TrainingConfig
from silic.mdp import State, StateSpace, TabularMDP, TransitionModel

DIARY_HEADER = (
    "person_id,day,depart_minute,activity,distance_miles,travel_minutes,"
    "is_representative,survey_complete"
)

# Two weekdays for p1 and p2, one Saturday for p2, one day only for p3.
DIARY_ROWS = [
    "p1,2017-04-03,510,Work,5.0,20,1,1",
    "p1,2017-04-03,1065,Home,5.0,25,1,1",
    "p1,2017-04-04,540,Work,4.0,15,1,1",
    "p1,2017-04-04,1090,Shopping,1.5,10,1,1",
    "p1,2017-04-04,1145,Home,2.0,,1,1",
    "p2,2017-04-03,600,School,2.0,12,yes,yes",
    "p2,2017-04-03,900,Home,2.0,12,yes,yes",
    "p2,2017-04-05,420,Escort,1.0,8,yes,yes",
    "p2,2017-04-05,480,Home,1.0,9,yes,yes",
    "p2,2017-04-08,600,Social / Recreational,3.0,30,yes,yes",
    "p3,2017-04-03,600,Work,3.0,30,1,1",
]


def toy_space(n_max=2, n_hours=3, n_activities=2):
    return StateSpace(n_max=n_max, n_hours=n_hours, n_activities=n_activities)


def toy_config(space, **changes):
    settings = dict(gamma=1.0, eps_value=1e-12, horizon=space.n_hours, max_iters=50)
    settings.update(changes)
    return TrainingConfig(**settings)


def random_mdp(space, rng, deterministic=False, start=None):
    if deterministic:
        matrix = np.eye(space.n_activities)[rng.permutation(space.n_activities)]
    else:
        matrix = rng.dirichlet(np.ones(space.n_activities), size=space.n_activities)
    transition = TransitionModel(matrix, space.n_max, space.n_hours)
    if start is None:
        start = State(0, 0, True, 1)
    return TabularMDP(space, transition, {start: 1.0})


def random_policy(space, rng):
    travel = rng.uniform(0.05, 0.95, size=space.size)
    return np.column_stack((1.0 - travel, travel))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def space():
    return toy_space()


@pytest.fixture
def diary_csv(tmp_path):
    path = tmp_path / "diary.csv"
    path.write_text("\n".join([DIARY_HEADER] + DIARY_ROWS) + "\n", encoding="utf-8")
    return path
