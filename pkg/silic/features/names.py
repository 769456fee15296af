FEATURE_COLUMNS = [
    "trip_distance",
    "std_trip_distance",
    "num_trips_per_day",
    "std_num_trips_per_day",
    "destination_entropy",
    "pct_work_trips",
    "pct_school_trips",
    "pct_shopping_trips",
    "pct_social_recreation_trips",
    "pct_errand_trips",
    "pct_escort_trips",
    "travel_time",
    "std_travel_time",
    "first_departure_time",
    "last_departure_time",
    "home_time",
    "work_time",
]

FEATURE_UNITS = {
    "trip_distance": "miles",
    "std_trip_distance": "miles",
    "travel_time": "minutes",
    "std_travel_time": "minutes",
    "first_departure_time": "hour of day",
    "last_departure_time": "hour of day",
    "home_time": "hours per day",
    "work_time": "hours per day",
    "destination_entropy": "nats",
}

DEFAULT_PERCENTILE = 60.0
DEFAULT_TRAIN_FRACTION = 0.8
