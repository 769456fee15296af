import threading
from collections import defaultdict, deque

from logzero import logger

from ..errors import ProviderUnavailableError
from .BaseGuidanceProvider import BaseGuidanceProvider
from .ExchangeLog import read_exchange_log


class ReplayGuidanceProvider(BaseGuidanceProvider):
    r"""Serves responses from a logged run, per (person_id, kind) in log order.

    Transport failures in the log are reproduced: they are re-recorded and, if
    the logged call gave up after them, ProviderUnavailableError is raised at
    the same point. A log that runs out or goes out of step also raises it.
    """

    model_name = "replay"

    def __init__(self, exchanges, space=None, exchange_log=None):
        super(ReplayGuidanceProvider, self).__init__(space, exchange_log)
        self._queues = defaultdict(deque)
        for exchange in exchanges:
            self._queues[(exchange.person_id, exchange.kind)].append(exchange)
        self._lock = threading.Lock()

    @classmethod
    def from_file(cls, path, space=None, exchange_log=None):
        with open(path, encoding="utf-8") as stream:
            return cls(read_exchange_log(stream), space, exchange_log)

    def _next(self, call):
        queue = self._queues[(call.person_id, call.kind)]
        with self._lock:
            exchange = queue.popleft() if queue else None
        if exchange is None:
            raise ProviderUnavailableError(
                "replay log has no {} exchange left for {}".format(call.kind, call.person_id)
            )
        if exchange.attempt != call.attempt + 1:
            raise ProviderUnavailableError(
                "replay out of step for {} {}: logged attempt {}, expected {}".format(
                    call.person_id, call.kind, exchange.attempt, call.attempt + 1
                )
            )
        if exchange.prompt != call.prompt:
            logger.warning(
                "replayed %s prompt for %s differs from the logged one", call.kind, call.person_id
            )
        return exchange

    def _continues(self, call):
        queue = self._queues[(call.person_id, call.kind)]
        with self._lock:
            return bool(queue) and queue[0].attempt == call.attempt + 1

    def _complete(self, call):
        while True:
            exchange = self._next(call)
            if not exchange.is_transport_failure:
                return exchange.raw_response
            self._record(call, None, None, exchange.error)
            if not self._continues(call):
                raise ProviderUnavailableError(
                    "logged {} call for {} gave up: {}".format(
                        call.kind, call.person_id, exchange.error
                    )
                )
