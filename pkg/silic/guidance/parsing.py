import re
import warnings

import numpy as np
from logzero import logger

from ..errors import ClampedWeightWarning, ParseError
from .names import DIRECTIONS, N_FEATURES, WEIGHT_BOUND

LIST_REGEX = re.compile(r"\[([^\[\]]*)\]")
INTEGER_REGEX = re.compile(r"(?<![\w.])(-?\d+)(?!\.\d|\w)")


def _first_list(text):
    match = LIST_REGEX.search(text or "")
    if match is None:
        raise ParseError("no bracketed list in response: {!r}".format((text or "")[:80]))
    body = match.group(1).strip()
    return [token.strip() for token in body.split(",")] if body else []


def _check_arity(tokens, n_features):
    if len(tokens) != n_features:
        raise ParseError("expected {} entries, got {}".format(n_features, len(tokens)))


def parse_init_response(text, n_features=N_FEATURES):
    r"""First bracketed list of ``n_features`` finite reals; values beyond +-2 are clamped."""
    tokens = _first_list(text)
    _check_arity(tokens, n_features)
    try:
        values = np.array([float(token) for token in tokens])
    except ValueError as exception:
        raise ParseError("non-numeric entry: {}".format(exception)) from exception
    if not np.isfinite(values).all():
        raise ParseError("non-finite entry in initialization")

    clamped = np.clip(values, -WEIGHT_BOUND, WEIGHT_BOUND)
    changed = np.flatnonzero(clamped != values)
    if changed.size:
        message = "clamped {} initial weights at positions {}".format(
            changed.size, changed.tolist()
        )
        logger.warning(message)
        warnings.warn(message, ClampedWeightWarning, stacklevel=2)
    return clamped


def parse_update_response(text, n_features=N_FEATURES):
    tokens = _first_list(text)
    _check_arity(tokens, n_features)
    directions = []
    for position, token in enumerate(tokens):
        try:
            value = int(token)
        except ValueError:
            raise ParseError("entry {} is not an integer: {!r}".format(position, token))
        if value not in DIRECTIONS:
            raise ParseError("entry {} = {} outside {{-1, 0, 1}}".format(position, value))
        directions.append(value)
    return np.array(directions, dtype=int)


def parse_label(text, task):
    r"""First standalone integer in ``text``, checked against the task's classes."""
    match = INTEGER_REGEX.search(text or "")
    if match is None:
        raise ParseError("no integer label in response: {!r}".format((text or "")[:80]))
    label = int(match.group(1))
    if not 0 <= label < len(task.classes):
        raise ParseError(
            "label {} outside [0, {}) for {}".format(label, len(task.classes), task.attribute)
        )
    return label


def render_weights(theta):
    return "[{}]".format(", ".join(repr(float(v)) for v in theta))


def render_directions(directions):
    return "[{}]".format(", ".join(str(int(v)) for v in directions))


def render_label(label):
    return str(int(label))
