import os
import threading
import time

import backoff
import openai
from logzero import logger

from ..errors import InvalidConfigError, ProviderUnavailableError
from .BaseGuidanceProvider import BaseGuidanceProvider
from .names import API_KEY_ENV


class RemoteGuidanceProvider(BaseGuidanceProvider):
    r"""Chat-completion backend: one user message per prompt, temperature 0.

    Transport failures are retried with exponential backoff up to
    ``max_attempts`` tries; every try is logged as an exchange. At most
    ``concurrency`` requests are in flight across threads.
    """

    def __init__(
        self,
        base_url,
        model,
        space=None,
        exchange_log=None,
        api_key=None,
        concurrency=4,
        max_attempts=3,
        backoff_factor=1.0,
        timeout=60.0,
        client=None,
    ):
        super(RemoteGuidanceProvider, self).__init__(space, exchange_log)

        self.model_name = model
        self.max_attempts = max_attempts
        self._slots = threading.BoundedSemaphore(concurrency)

        if client is None:
            api_key = api_key or os.environ.get(API_KEY_ENV)
            if not base_url or not api_key:
                raise InvalidConfigError(
                    "remote provider needs a base URL and the {} credential".format(API_KEY_ENV)
                )
            client = openai.OpenAI(
                base_url=base_url, api_key=api_key, timeout=timeout, max_retries=0
            )
        self._client = client

        self._request = backoff.on_exception(
            backoff.expo,
            openai.OpenAIError,
            max_tries=max_attempts,
            factor=backoff_factor,
            jitter=None,
            on_giveup=self._give_up,
            raise_on_giveup=False,
        )(self._request_once)

    def _complete(self, call):
        with self._slots:
            text = self._request(call)
        if text is None:
            raise ProviderUnavailableError(
                "{} request for {} failed after {} attempts".format(
                    call.kind, call.person_id, self.max_attempts
                )
            )
        return text

    def _request_once(self, call):
        start = time.perf_counter()
        try:
            completion = self._client.chat.completions.create(
                model=self.model_name,
                messages=[{"role": "user", "content": call.prompt}],
                temperature=0,
            )
        except openai.OpenAIError as exception:
            self._record(
                call,
                None,
                None,
                "transport: {}: {}".format(type(exception).__name__, exception),
                1000.0 * (time.perf_counter() - start),
            )
            raise
        return completion.choices[0].message.content or ""

    @staticmethod
    def _give_up(details):
        logger.warning(
            "giving up after %d tries: %s", details["tries"], details.get("exception")
        )
