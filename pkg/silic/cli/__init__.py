from .Pipeline import COMMANDS, Pipeline
from .RunConfig import (
    AblateConfig,
    FeaturesConfig,
    PathsConfig,
    PredictConfig,
    ProviderConfig,
    RunConfig,
    SynthConfig,
    load_config,
)
from .parser import build_parser, main
