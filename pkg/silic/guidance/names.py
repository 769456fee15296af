from pathlib import Path
from string import Template

from ..mdp.names import N_ACTIVITIES, N_HOURS, N_MAX

templates_dir = Path(__file__).parent / "templates"
INIT_TEMPLATE = Template((templates_dir / "reward_init.txt").read_text(encoding="utf-8"))
UPDATE_TEMPLATE = Template((templates_dir / "reward_update.txt").read_text(encoding="utf-8"))

N_FEATURES = N_ACTIVITIES + N_HOURS + 2
TOP_K = 30
WEIGHT_BOUND = 2.0
DIRECTIONS = (-1, 0, 1)
MAX_PARSE_ATTEMPTS = 3

INIT, UPDATE, CCR = "init", "update", "ccr"
EXCHANGE_KINDS = (INIT, UPDATE, CCR)

API_KEY_ENV = "SILIC_API_KEY"


def feature_descriptions(n_max=N_MAX, n_hours=N_HOURS, n_activities=N_ACTIVITIES):
    return (
        ["activity type indicator (one-hot)"] * n_activities
        + ["hour-of-day indicator (one-hot)"] * n_hours
        + [
            "first activity of the day indicator (binary)",
            "cumulative activity count divided by {}".format(n_max),
        ]
    )
