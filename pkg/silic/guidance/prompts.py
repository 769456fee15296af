import numpy as np

from ..errors import PreconditionError
from ..mdp.StateSpace import build_state_space
from .names import INIT_TEMPLATE, TOP_K, UPDATE_TEMPLATE, feature_descriptions


def render_feature_schema(space=None):
    r"""Numbered ``index. name: description`` lines, one per feature slot."""
    space = space or build_state_space()
    descriptions = feature_descriptions(space.n_max, space.n_hours, space.n_activities)
    return "\n".join(
        "{}. {}: {}".format(i, name, description)
        for i, (name, description) in enumerate(zip(space.feature_names, descriptions))
    )


def render_theta(theta):
    r"""Bracketed list with 6 decimals; negative zero is printed as 0.000000."""
    return "[{}]".format(", ".join("{:.6f}".format(float(v) + 0.0) for v in np.asarray(theta)))


def render_state(state, space):
    hour, activity, is_first, count = state
    return "({}, {}, {}, {})".format(
        hour, space.activity_names[activity], int(bool(is_first)), count
    )


def render_mismatches(report, space):
    return "\n".join(
        "- {} expert={:.6f} learner={:.6f}".format(
            render_state(entry.state, space), entry.expert_mass, entry.learner_mass
        )
        for entry in report
    )


def build_init_prompt(diary_text, feature_schema_text, n_features=None):
    if not diary_text or not diary_text.strip():
        raise PreconditionError("diary text is empty")
    if n_features is None:
        n_features = len(feature_schema_text.splitlines())
    return INIT_TEMPLATE.substitute(
        travel_diaries=diary_text,
        state_features=feature_schema_text,
        n_features=n_features,
    )


def build_update_prompt(theta, report, space=None, top_k=TOP_K):
    space = space or build_state_space()
    if len(report) > top_k:
        raise PreconditionError(
            "mismatch report has {} entries, at most {} allowed".format(len(report), top_k)
        )
    return UPDATE_TEMPLATE.substitute(
        theta=render_theta(theta),
        top_k=top_k,
        mismatches=render_mismatches(report, space),
        n_features=space.n_features,
        n_activities=space.n_activities,
        activity_types=", ".join(space.activity_names),
        n_hours=space.n_hours,
        last_hour=space.n_hours - 1,
    )
