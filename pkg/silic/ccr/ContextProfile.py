import math
from dataclasses import asdict, dataclass

import pandas as pd

from ..errors import InvalidConfigError, RowError, SchemaError
from .names import CONTEXT_COLUMNS, DENSITY_COLUMNS, HOUSING_TYPES, PROPORTION_COLUMNS


@dataclass(frozen=True)
class ContextProfile(object):
    r"""Environmental attributes of a person's home location."""

    urban_indicator: int
    population_density: float
    distance_to_transit_m: float
    network_density: float
    housing_density: float
    residential_proportion: float
    commercial_proportion: float
    educational_proportion: float
    recreational_proportion: float
    housing_type: str

    def __post_init__(self):
        if self.urban_indicator not in (0, 1):
            raise InvalidConfigError("urban_indicator must be 0 or 1")
        for name in DENSITY_COLUMNS:
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise InvalidConfigError("{} must be finite and >= 0, got {}".format(name, value))
        for name in PROPORTION_COLUMNS:
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidConfigError("{} must lie in [0, 1]".format(name))
        if self.housing_type not in HOUSING_TYPES:
            raise InvalidConfigError(
                "housing_type {!r} not in {}".format(self.housing_type, sorted(HOUSING_TYPES))
            )

    def render_lines(self):
        return [
            "  - Urban/Rural: {}".format("urban" if self.urban_indicator else "rural"),
            "  - Population Density: {:.2f} people per square mile".format(
                self.population_density
            ),
            "  - Distance to Transit: {:.2f} m".format(self.distance_to_transit_m),
            "  - Network Density: {:.2f} km of road per square km".format(self.network_density),
            "  - Housing Density: {:.2f} housing units per square mile".format(
                self.housing_density
            ),
            "  - Residential Proportion: {:.3f}".format(self.residential_proportion),
            "  - Commercial Proportion: {:.3f}".format(self.commercial_proportion),
            "  - Educational Proportion: {:.3f}".format(self.educational_proportion),
            "  - Recreational Proportion: {:.3f}".format(self.recreational_proportion),
            "  - Housing Type: {}".format(HOUSING_TYPES[self.housing_type]),
        ]

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_row(cls, row):
        return cls(
            urban_indicator=int(row["urban_indicator"]),
            housing_type=str(row["housing_type"]).strip(),
            **{name: float(row[name]) for name in CONTEXT_COLUMNS[1:9]}
        )


def read_context_file(stream):
    r"""Context CSV keyed by person_id -> {person_id: ContextProfile}."""
    frame = pd.read_csv(stream, dtype={"person_id": str})
    for column in ["person_id"] + CONTEXT_COLUMNS:
        if column not in frame.columns:
            raise SchemaError("missing context column {!r}".format(column), column=column)

    profiles = {}
    for line, row in enumerate(frame.to_dict("records"), start=2):
        try:
            profiles[str(row["person_id"]).strip()] = ContextProfile.from_row(row)
        except (ValueError, TypeError) as exception:
            raise RowError("context line {}: {}".format(line, exception), line=line)
    return profiles
