from enum import IntEnum

N_HOURS = 24
N_ACTIVITIES = 5
N_MAX = 10


class ActivityCategory(IntEnum):
    Home = 0
    Work = 1
    Education = 2
    EscortErrand = 3
    Leisure = 4


class Action(IntEnum):
    Stay = 0
    Travel = 1


ACTIVITY_NAMES = [category.name for category in ActivityCategory]


def activity_names(n_activities=N_ACTIVITIES):
    r"""Names of the first ``n_activities`` categories; toy spaces use a prefix."""
    return ACTIVITY_NAMES[:n_activities]


def feature_names(n_hours=N_HOURS, n_activities=N_ACTIVITIES):
    return (
        ["activity_{}".format(name) for name in activity_names(n_activities)]
        + ["hour_{}".format(hour) for hour in range(n_hours)]
        + ["is_first_trip", "activity_segment_count"]
    )
