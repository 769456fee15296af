import numpy as np

from ..errors import InvalidConfigError, PreconditionError
from ..mdp.names import feature_names
from .names import INPUTS_TEMPLATE, TEMPLATES


def render_label_examples(n_classes):
    labels = [str(k) for k in range(n_classes)]
    if n_classes == 2:
        return "{} or {}".format(*labels)
    return "{}, or {}".format(", ".join(labels[:-1]), labels[-1])


def render_inputs(theta, context, task, names=None):
    r"""Input block shared by every prediction mode."""
    theta = np.asarray(theta, dtype=float)
    names = names or feature_names()
    if len(names) != len(theta):
        raise PreconditionError("theta has {} entries, expected {}".format(len(theta), len(names)))
    return INPUTS_TEMPLATE.substitute(
        theta_lines="\n".join(
            "  - {}: {:.6f}".format(name, value + 0.0) for name, value in zip(names, theta)
        ),
        context_lines="\n".join(context.render_lines()),
        label_lines="\n".join(
            "  - {}: {}".format(k, label) for k, label in enumerate(task.classes)
        ),
    ).rstrip("\n")


def _build(mode, theta, context, task, names):
    return TEMPLATES[mode].substitute(
        attribute=task.display_name,
        n_features=len(theta),
        inputs=render_inputs(theta, context, task, names),
        label_examples=render_label_examples(len(task.classes)),
    )


def build_ccr_prompt(theta, context, task, names=None):
    return _build("ccr", theta, context, task, names)


def build_ablation_prompt(theta, context, task, mode, names=None):
    if mode not in ("direct", "cot"):
        raise InvalidConfigError("ablation mode must be direct or cot, got {!r}".format(mode))
    return _build(mode, theta, context, task, names)


def build_prediction_prompt(theta, context, task, mode="ccr", names=None):
    if mode == "ccr":
        return build_ccr_prompt(theta, context, task, names)
    return build_ablation_prompt(theta, context, task, mode, names)
