import hashlib

import numpy as np

from ..diary.utils import diary_occupancy
from .BaseGuidanceProvider import BaseGuidanceProvider
from .names import CCR, INIT, UPDATE, WEIGHT_BOUND
from .parsing import render_directions, render_label, render_weights

SCORE_TOLERANCE = 1e-9


class ScriptedGuidanceProvider(BaseGuidanceProvider):
    r"""Deterministic offline stand-in for the language model.

    Answers are computed from the structured call context and rendered in the
    response formats the parsers expect, so the whole exchange path is exercised.
    """

    model_name = "scripted-heuristic"

    def _complete(self, call):
        if call.kind == INIT:
            return render_weights(self.initial_weights(call.context["diary_text"]))
        if call.kind == UPDATE:
            return render_directions(self.directions(call.context["report"]))
        if call.kind == CCR:
            return render_label(self.label(call.prompt, len(call.context["task"].classes)))
        raise ValueError("unknown exchange kind {!r}".format(call.kind))

    def initial_weights(self, diary_text):
        r"""2 * (share - 1 / n_slots) for activity and hour slots; other weights 0."""
        space = self.space
        theta = np.zeros(space.n_features)
        days = diary_occupancy(diary_text, space.n_max, space.n_hours)
        states = [state for day in days for state in day]
        if not states:
            return theta

        activities = np.bincount([s.activity for s in states], minlength=space.n_activities)
        hours = np.bincount([s.hour for s in states], minlength=space.n_hours)
        theta[: space.n_activities] = 2.0 * (activities / len(states) - 1.0 / space.n_activities)
        theta[space.n_activities : space.n_activities + space.n_hours] = 2.0 * (
            hours / len(states) - 1.0 / space.n_hours
        )
        return np.clip(theta, -WEIGHT_BOUND, WEIGHT_BOUND)

    def directions(self, report):
        score = np.zeros(self.space.n_features)
        for entry in report:
            sign = np.sign(entry.expert_mass - entry.learner_mass)
            score += sign * self.space.features[self.space.index(entry.state)]
        directions = np.sign(score).astype(int)
        directions[np.abs(score) < SCORE_TOLERANCE] = 0
        return directions

    @staticmethod
    def label(prompt, n_classes):
        digest = hashlib.sha256(prompt.encode("utf-8")).hexdigest()
        return int(digest[:8], 16) % n_classes
