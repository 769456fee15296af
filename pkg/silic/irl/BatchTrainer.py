from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple, Optional

from logzero import logger

from ..errors import SilicError
from .IRLTrainer import IRLTrainer


class PersonData(NamedTuple):
    trajectories: list
    dynamics: object
    diary_text: Optional[str] = None


class BatchResult(NamedTuple):
    models: list
    failures: dict


class BatchTrainer(object):
    r"""Trains many persons on a worker pool; results come back sorted by person_id.

    A SilicError for one person is recorded in ``failures`` and the batch
    carries on.
    """

    def __init__(self, provider=None, config=None, concurrency=4):
        self.trainer = IRLTrainer(provider, config)
        self.concurrency = max(1, int(concurrency))

    def _train_one(self, person_id, data):
        try:
            return self.trainer.train(
                data.trajectories, data.dynamics, person_id=person_id, diary_text=data.diary_text
            )
        except SilicError as exception:
            logger.error("person %s failed: %s", person_id, exception)
            return exception

    def train(self, persons):
        person_ids = sorted(persons)
        with ThreadPoolExecutor(max_workers=self.concurrency) as pool:
            outcomes = list(
                pool.map(lambda pid: self._train_one(pid, persons[pid]), person_ids)
            )

        models, failures = [], {}
        for person_id, outcome in zip(person_ids, outcomes):
            if isinstance(outcome, SilicError):
                failures[person_id] = outcome
            else:
                models.append(outcome)
        if failures:
            logger.warning("%d of %d persons failed to train", len(failures), len(person_ids))
        return BatchResult(models, failures)
