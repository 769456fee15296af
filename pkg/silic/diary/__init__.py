from .DiaryReader import DiaryReader, ParsedDiary, TripRecord, parse_diary_file
from .Trajectory import Trajectory, read_trajectories, write_trajectories
from .utils import (
    EmpiricalDynamics,
    build_day,
    diary_occupancy,
    diary_to_trajectories,
    dynamics_from_dict,
    dynamics_to_dict,
    estimate_empirical_dynamics,
    filter_participants,
    group_by_person,
    map_activity,
    parse_diary_text,
    render_diary_text,
    render_trajectory_diary,
    resolve_activity,
    synthetic_day,
)
