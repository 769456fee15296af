import json
import threading
from queue import Queue

from logzero import logger

from .errors import ArtifactWriteError

_CLOSE = object()


class JsonlWriter(object):
    r"""Append-only JSONL artifact fed through a queue and drained by one writer thread.

    Safe to share between worker threads; records land in submission order.
    An OSError in the writer thread is kept and raised as ArtifactWriteError
    from the next ``write``, ``flush`` or ``close``; the queue keeps draining
    so no producer blocks on it.
    """

    def __init__(self, path, mode="w"):
        self.path = path
        self._file = open(path, mode, encoding="utf-8")
        self.n_written = 0
        self.error = None

        self.buffer = Queue()
        self.job = threading.Thread(target=self.run)
        self.job.daemon = True
        self.job.start()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self.close()

    def write(self, record):
        if self._file is None:
            raise RuntimeError("writer for {} is closed".format(self.path))
        self._check()
        self.buffer.put(record)

    def run(self):
        while True:
            record = self.buffer.get()
            try:
                if record is _CLOSE:
                    return
                if self.error is None:
                    self._file.write(json.dumps(record) + "\n")
                    self._file.flush()
                    self.n_written += 1
            except (TypeError, ValueError):
                logger.exception("dropping unserializable record for %s", self.path)
            except OSError as exception:
                logger.error("writing %s failed: %s", self.path, exception)
                self.error = exception
            finally:
                self.buffer.task_done()

    def _check(self):
        if self.error is not None:
            raise ArtifactWriteError(
                "writing {} failed after {} records: {}".format(
                    self.path, self.n_written, self.error
                ),
                path=str(self.path),
            ) from self.error

    def flush(self):
        self.buffer.join()
        self._check()

    def close(self):
        if self._file is None:
            return
        self.buffer.put(_CLOSE)
        self.job.join()
        try:
            self._file.close()
        except OSError as exception:
            self.error = self.error or exception
        self._file = None
        self._check()
