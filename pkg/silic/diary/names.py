from pathlib import Path

import pandas as pd

from ..mdp.names import ActivityCategory

activity_map_file = Path(__file__).parent / "activity_map.csv"
ACTIVITY_MAP = {
    row.label: ActivityCategory[row.category]
    for row in pd.read_csv(activity_map_file, dtype=str).itertuples(index=False)
}

DIARY_COLUMNS = [
    "person_id",
    "day",
    "depart_minute",
    "activity",
    "distance_miles",
    "travel_minutes",
    "is_representative",
    "survey_complete",
]
FIRST_ACTIVITY_COLUMN = "first_activity"

TRUE_TOKENS = {"1", "true", "t", "yes", "y"}
FALSE_TOKENS = {"0", "false", "f", "no", "n"}

# Raw destination labels behind the purpose shares of the mobility features.
WORK_LABELS = {"Work", "Work-related"}
SCHOOL_LABELS = {"School"}
SHOPPING_LABELS = {"Shopping"}
SOCIAL_LABELS = {"Social / Recreational"}
ERRAND_LABELS = {"Personal Business / Errand / Appointment"}
ESCORT_LABELS = {"Escort"}

TRANSITION_SMOOTHING = 1e-3
