import datetime
import hashlib
import json
from dataclasses import asdict, dataclass
from typing import Any, Optional

from ..JsonlWriter import JsonlWriter


@dataclass(frozen=True)
class GuidanceExchange(object):
    r"""One provider attempt. ``parsed`` is set iff the response parsed."""

    kind: str
    person_id: Optional[str]
    attempt: int
    prompt: str
    raw_response: Optional[str]
    parsed: Any
    error: Optional[str]
    model_name: str
    latency_ms: float
    timestamp: str
    exchange_id: Optional[str] = None

    @property
    def is_transport_failure(self):
        return self.raw_response is None

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, doc):
        return cls(**doc)


def exchange_id(kind, person_id, prompt):
    r"""Stable id of one logical call, shared by all of its attempts."""
    digest = hashlib.sha256("\x1f".join((kind, str(person_id), prompt)).encode("utf-8"))
    return digest.hexdigest()[:16]


def utc_timestamp():
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


class ExchangeLog(JsonlWriter):
    r"""Append-only exchange audit trail; also the input of replay runs."""

    def __init__(self, path, mode="a"):
        super(ExchangeLog, self).__init__(path, mode=mode)

    def append(self, exchange):
        self.write(exchange.to_dict())


def read_exchange_log(stream):
    return [GuidanceExchange.from_dict(json.loads(line)) for line in stream if line.strip()]
