from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from logzero import logger

from ..errors import ContextMissingError, SilicError
from .prompts import build_prediction_prompt


@dataclass(frozen=True)
class Prediction(object):
    r"""One person's label; ``label_index`` is None for an unresolved prediction.

    ``exchange_id`` and ``exchange_attempt`` point at the exchange log record
    that settled the label; both stay None when no exchange took place.
    """

    person_id: str
    attribute: str
    mode: str
    label_index: Optional[int]
    label_name: Optional[str] = None
    error: Optional[str] = None
    exchange_id: Optional[str] = field(default=None, compare=False)
    exchange_attempt: Optional[int] = field(default=None, compare=False)

    @property
    def unresolved(self):
        return self.label_index is None

    def to_row(self):
        return {
            "person_id": self.person_id,
            "attribute": self.attribute,
            "mode": self.mode,
            "label_index": "" if self.unresolved else self.label_index,
            "label_name": self.label_name or "",
            "unresolved": int(self.unresolved),
            "exchange_id": self.exchange_id or "",
            "exchange_attempt": "" if self.exchange_attempt is None else self.exchange_attempt,
        }


class Predictor(object):
    r"""Prompts the provider for one attribute per person under a worker pool."""

    def __init__(self, provider, task, mode="ccr", concurrency=4, names=None):
        self.provider = provider
        self.task = task
        self.mode = mode
        self.concurrency = max(1, int(concurrency))
        self.names = names

    def predict_one(self, model, contexts):
        person_id = model.person_id
        try:
            context = contexts.get(person_id)
            if context is None:
                raise ContextMissingError("no context for person {}".format(person_id))
            prompt = build_prediction_prompt(
                model.theta, context, self.task, self.mode, self.names
            )
            label, reference = self._label(prompt, person_id)
        except SilicError as exception:
            logger.warning("prediction for %s unresolved: %s", person_id, exception)
            return Prediction(
                person_id, self.task.attribute, self.mode, None, error=exception.kind
            )
        trace = {}
        if reference is not None:
            trace = {"exchange_id": reference.exchange_id, "exchange_attempt": reference.attempt}
        if label is None:
            return Prediction(
                person_id, self.task.attribute, self.mode, None, error="parse-error", **trace
            )
        return Prediction(
            person_id, self.task.attribute, self.mode, label, self.task.classes[label], **trace
        )

    def _label(self, prompt, person_id):
        traced = getattr(self.provider, "traced_label", None)
        if traced is None:
            return self.provider.predict_label(prompt, self.task, person_id=person_id), None
        return traced(prompt, self.task, person_id=person_id)

    def predict_batch(self, models, contexts):
        models = sorted(models, key=lambda model: model.person_id)
        with ThreadPoolExecutor(max_workers=self.concurrency) as pool:
            predictions = list(pool.map(lambda model: self.predict_one(model, contexts), models))
        n_unresolved = sum(prediction.unresolved for prediction in predictions)
        if n_unresolved:
            logger.warning(
                "%d of %d %s predictions unresolved", n_unresolved, len(predictions),
                self.task.attribute,
            )
        return predictions


def predict_batch(models, contexts, provider, task, mode="ccr", concurrency=4):
    return Predictor(provider, task, mode, concurrency).predict_batch(models, contexts)
