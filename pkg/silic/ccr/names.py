from pathlib import Path
from string import Template
from typing import NamedTuple, Tuple

from ..errors import InvalidConfigError


class AttributeTask(NamedTuple):
    attribute: str
    display_name: str
    classes: Tuple[str, ...]


def make_task(attribute, display_name, classes):
    classes = tuple(classes)
    if len(classes) < 2 or len(set(classes)) != len(classes):
        raise InvalidConfigError("task {} needs >= 2 unique classes".format(attribute))
    return AttributeTask(attribute, display_name, classes)


TASKS = {
    task.attribute: task
    for task in (
        make_task("gender", "gender", ("male", "female")),
        make_task("age", "age", ("18-44", "45-64", "65+")),
        # household income, used as the individual's proxy
        make_task("income", "income level", ("<50k", "50-100k", "100k+")),
        make_task("employment", "employment status", ("unemployed", "employed", "retired")),
    )
}

MODES = ("ccr", "cot", "direct")

# snake_case context columns, in display order
CONTEXT_COLUMNS = [
    "urban_indicator",
    "population_density",
    "distance_to_transit_m",
    "network_density",
    "housing_density",
    "residential_proportion",
    "commercial_proportion",
    "educational_proportion",
    "recreational_proportion",
    "housing_type",
]
PROPORTION_COLUMNS = CONTEXT_COLUMNS[5:9]
DENSITY_COLUMNS = CONTEXT_COLUMNS[1:5]

HOUSING_TYPES = {
    "residential_condominium": "Residential Condominium",
    "single_family": "Single Family Unit",
    "multi_unit_2_4": "Multi-Unit (2-4)",
    "multi_unit_5_plus": "Multi-Unit (>5)",
}

templates_dir = Path(__file__).parent / "templates"
TEMPLATES = {
    mode: Template((templates_dir / "{}.txt".format(mode)).read_text(encoding="utf-8"))
    for mode in MODES
}
INPUTS_TEMPLATE = Template((templates_dir / "inputs.txt").read_text(encoding="utf-8"))


def get_task(attribute):
    try:
        return TASKS[attribute]
    except KeyError:
        raise InvalidConfigError(
            "unknown attribute {!r}, expected one of {}".format(attribute, sorted(TASKS))
        )
