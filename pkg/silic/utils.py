import hashlib
import json

import numpy as np

RNG_STREAMS = {"agent": 1, "rollout": 2, "split": 3}


def make_rng(seed, stream):
    r"""Independent generator for a named sub-stream of the run seed."""
    return np.random.default_rng([int(seed), RNG_STREAMS[stream]])


def config_hash(doc):
    r"""First 16 hex chars of SHA-256 over the sorted-key JSON of ``doc``."""
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]
