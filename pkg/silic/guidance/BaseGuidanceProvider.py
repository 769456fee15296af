import time
from abc import ABCMeta, abstractmethod
from typing import NamedTuple

import numpy as np
from logzero import logger

from ..errors import ParseError
from ..mdp.StateSpace import build_state_space
from .ExchangeLog import GuidanceExchange, exchange_id, utc_timestamp
from .names import CCR, INIT, MAX_PARSE_ATTEMPTS, TOP_K, UPDATE
from .parsing import parse_init_response, parse_label, parse_update_response
from .prompts import build_init_prompt, build_update_prompt, render_feature_schema


class ExchangeReference(NamedTuple):
    exchange_id: str
    attempt: int


class GuidanceCall(object):
    r"""One logical request; ``attempt`` counts every logged try, transport or parse."""

    def __init__(self, kind, person_id, prompt, **context):
        self.kind = kind
        self.person_id = person_id
        self.prompt = prompt
        self.context = context
        self.attempt = 0
        self.exchange_id = exchange_id(kind, person_id, prompt)


class BaseGuidanceProvider(object, metaclass=ABCMeta):
    r"""Heuristic guidance contract: reward initialization, update directions, labels.

    Subclasses implement ``_complete`` and return the raw response text for a
    call; this class owns prompting, parsing, parse retries, fallbacks and the
    exchange log. ``_complete`` raises ProviderUnavailableError when it gives up.
    """

    model_name = "base"

    def __init__(self, space=None, exchange_log=None, max_parse_attempts=MAX_PARSE_ATTEMPTS):
        self.space = space or build_state_space()
        self.exchange_log = exchange_log
        self.max_parse_attempts = max_parse_attempts
        self._feature_schema = render_feature_schema(self.space)

    @abstractmethod
    def _complete(self, call):
        r"""Response text for ``call``, specific to the backend."""
        pass

    def initialize(self, diary_text, person_id=None):
        prompt = build_init_prompt(diary_text, self._feature_schema, self.space.n_features)
        call = GuidanceCall(INIT, person_id, prompt, diary_text=diary_text)
        return self._exchange(
            call,
            lambda text: parse_init_response(text, self.space.n_features),
            fallback=np.zeros(self.space.n_features),
        )

    def suggest_directions(self, theta, report, person_id=None):
        prompt = build_update_prompt(theta, report, self.space, max(TOP_K, len(report)))
        call = GuidanceCall(UPDATE, person_id, prompt, theta=theta, report=report)
        return self._exchange(
            call,
            lambda text: parse_update_response(text, self.space.n_features),
            fallback=np.zeros(self.space.n_features, dtype=int),
        )

    def predict_label(self, prompt, task, person_id=None):
        r"""Label index for a built prediction prompt, or None when unresolved."""
        return self.traced_label(prompt, task, person_id)[0]

    def traced_label(self, prompt, task, person_id=None):
        r"""(label or None, ExchangeReference of the attempt that settled it)."""
        call = GuidanceCall(CCR, person_id, prompt, task=task)
        label = self._exchange(call, lambda text: parse_label(text, task), fallback=None)
        return label, ExchangeReference(call.exchange_id, call.attempt)

    def _exchange(self, call, parse, fallback):
        for _ in range(self.max_parse_attempts):
            start = time.perf_counter()
            text = self._complete(call)
            latency_ms = 1000.0 * (time.perf_counter() - start)
            try:
                payload = parse(text)
            except ParseError as exception:
                logger.warning(
                    "%s response for %s did not parse: %s", call.kind, call.person_id, exception
                )
                self._record(call, text, None, str(exception), latency_ms)
                continue
            self._record(call, text, payload, None, latency_ms)
            return payload

        logger.warning(
            "%s for %s fell back after %d unparseable responses",
            call.kind,
            call.person_id,
            self.max_parse_attempts,
        )
        return fallback

    def _record(self, call, raw_response, parsed, error, latency_ms=0.0):
        call.attempt += 1
        if self.exchange_log is None:
            return
        if isinstance(parsed, np.ndarray):
            parsed = parsed.tolist()
        self.exchange_log.append(
            GuidanceExchange(
                kind=call.kind,
                person_id=call.person_id,
                attempt=call.attempt,
                prompt=call.prompt,
                raw_response=raw_response,
                parsed=parsed,
                error=error,
                model_name=self.model_name,
                latency_ms=round(latency_ms, 3),
                timestamp=utc_timestamp(),
                exchange_id=call.exchange_id,
            )
        )
