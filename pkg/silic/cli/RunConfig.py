import dataclasses
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import List, Optional

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from ..ccr.names import MODES, TASKS
from ..errors import InvalidConfigError
from ..irl.TrainingConfig import TrainingConfig
from ..mdp.names import N_MAX
from ..utils import config_hash

PROVIDERS = ("remote", "scripted", "replay")
ABLATION_SOURCES = ("synthetic", "cache")


@dataclass(frozen=True)
class PathsConfig(object):
    diary: Optional[str] = None
    context: Optional[str] = None
    labels: Optional[str] = None
    out: str = "silic-out"


@dataclass(frozen=True)
class ProviderConfig(object):
    kind: str = "scripted"
    base_url: Optional[str] = None
    model: str = "gpt-4o"
    concurrency: int = 4
    replay_log: Optional[str] = None
    max_attempts: int = 3
    backoff_factor: float = 1.0
    timeout: float = 60.0


@dataclass(frozen=True)
class PredictConfig(object):
    attributes: List[str] = field(default_factory=lambda: ["gender"])
    mode: str = "ccr"


@dataclass(frozen=True)
class SynthConfig(object):
    n_agents: int = 20
    n_days: int = 5
    max_iters: int = 200
    alpha: float = 2.0
    gradient: str = "likelihood"
    l2: float = 0.01


@dataclass(frozen=True)
class AblateConfig(object):
    source: str = "synthetic"
    max_iters: int = 2


@dataclass(frozen=True)
class FeaturesConfig(object):
    percentile: float = 60.0
    train_fraction: float = 0.8


SECTIONS = {
    "paths": PathsConfig,
    "provider": ProviderConfig,
    "predict": PredictConfig,
    "synth": SynthConfig,
    "ablate": AblateConfig,
    "features": FeaturesConfig,
}


@dataclass(frozen=True)
class RunConfig(object):
    r"""Everything one pipeline run needs; loaded from TOML, then flag overrides."""

    seed: int = 0
    concurrency: int = 4
    strict: bool = False
    n_max: int = N_MAX
    paths: PathsConfig = field(default_factory=PathsConfig)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    predict: PredictConfig = field(default_factory=PredictConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)
    ablate: AblateConfig = field(default_factory=AblateConfig)
    features: FeaturesConfig = field(default_factory=FeaturesConfig)

    def __post_init__(self):
        if self.provider.kind not in PROVIDERS:
            raise InvalidConfigError(
                "provider must be one of {}, got {!r}".format(PROVIDERS, self.provider.kind)
            )
        if self.predict.mode not in MODES:
            raise InvalidConfigError("mode must be one of {}".format(MODES))
        for attribute in self.predict.attributes:
            if attribute not in TASKS:
                raise InvalidConfigError("unknown attribute {!r}".format(attribute))
        if self.ablate.source not in ABLATION_SOURCES:
            raise InvalidConfigError("[ablate] source must be one of {}".format(ABLATION_SOURCES))
        if self.concurrency < 1 or self.provider.concurrency < 1:
            raise InvalidConfigError("concurrency limits must be >= 1")
        if not 0 <= self.features.percentile <= 100:
            raise InvalidConfigError("[features] percentile must lie in [0, 100]")
        if not 0 < self.features.train_fraction < 1:
            raise InvalidConfigError("[features] train_fraction must lie in (0, 1)")
        if self.n_max < 1:
            raise InvalidConfigError("n_max must be >= 1")

    @property
    def out_dir(self):
        return Path(self.paths.out)

    @property
    def hash(self):
        r"""Identity of the experiment; transport settings and the output dir are left out."""
        doc = self.to_dict()
        for key in ("provider", "concurrency"):
            doc.pop(key)
        doc["paths"].pop("out")
        return config_hash(doc)

    def to_dict(self):
        return asdict(self)

    def require(self, *names):
        for name in names:
            value = getattr(self.paths, name)
            if value is None:
                raise InvalidConfigError("[paths] {} is required for this command".format(name))
            if not Path(value).exists():
                raise InvalidConfigError("[paths] {} does not exist: {}".format(name, value))

    @classmethod
    def from_dict(cls, doc):
        doc = dict(doc)
        training = dict(doc.pop("training", {}))
        n_max = training.pop("n_max", doc.pop("n_max", N_MAX))

        kwargs = {"n_max": n_max, "training": TrainingConfig.from_dict(training)}
        for name, section in SECTIONS.items():
            kwargs[name] = _section(section, doc.pop(name, {}), name)
        for name in ("seed", "concurrency", "strict"):
            if name in doc:
                kwargs[name] = doc.pop(name)
        if doc:
            raise InvalidConfigError("unknown config keys: {}".format(sorted(doc)))
        return cls(**kwargs)

    def with_overrides(self, provider=None, mode=None, seed=None, strict=None, out=None):
        config = self
        if provider is not None:
            config = dataclasses.replace(
                config, provider=dataclasses.replace(config.provider, kind=provider)
            )
        if mode is not None:
            config = dataclasses.replace(
                config, predict=dataclasses.replace(config.predict, mode=mode)
            )
        if out is not None:
            config = dataclasses.replace(config, paths=dataclasses.replace(config.paths, out=out))
        if seed is not None:
            config = dataclasses.replace(config, seed=seed)
        if strict:
            config = dataclasses.replace(config, strict=True)
        return config


def _section(section, doc, name):
    known = {f.name for f in fields(section)}
    unknown = set(doc) - known
    if unknown:
        raise InvalidConfigError("unknown [{}] keys: {}".format(name, sorted(unknown)))
    return section(**doc)


def load_config(path=None):
    if path is None:
        return RunConfig()
    try:
        with open(path, "rb") as stream:
            doc = tomllib.load(stream)
    except FileNotFoundError:
        raise InvalidConfigError("config file not found: {}".format(path))
    except tomllib.TOMLDecodeError as exception:
        raise InvalidConfigError("config file {} is not valid TOML: {}".format(path, exception))
    return RunConfig.from_dict(doc)
