import argparse
import logging
import sys

import logzero
from logzero import logger

from .. import __version__
from ..ccr.names import MODES
from ..errors import SilicError
from .Pipeline import COMMANDS, Pipeline
from .RunConfig import PROVIDERS, load_config

LOG_FILE = "silic.log"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="silic",
        description="Infer latent intentions from travel diaries and predict "
        "sociodemographic attributes from them.",
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-c", "--config", type=str, help="TOML run configuration", default=None,
    )
    common.add_argument(
        "-p", "--provider", choices=PROVIDERS, help="Guidance provider override",
    )
    common.add_argument(
        "-m", "--mode", choices=MODES, help="Prediction prompt mode override",
    )
    common.add_argument("-s", "--seed", type=int, help="Run seed override")
    common.add_argument(
        "--strict", action="store_true", help="Fail on the first bad diary row or person",
    )
    common.add_argument("-o", "--out", type=str, help="Output directory override")
    common.add_argument(
        "--log-level", choices=LOG_LEVELS, default="INFO", help="Console and file log level",
    )

    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True
    helps = {
        "ingest": "Parse the diary into trajectories, dynamics and features",
        "train": "Fit reward weights per person",
        "predict": "Predict attributes from trained weights and context",
        "evaluate": "Score predictions against labels, rank features",
        "synth": "Run the synthetic recovery suite",
        "ablate": "Run the initialization x update ablation grid",
    }
    for command in COMMANDS:
        commands.add_parser(command, parents=[common], help=helps[command])
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logzero.loglevel(getattr(logging, args.log_level))
    try:
        config = load_config(args.config).with_overrides(
            provider=args.provider,
            mode=args.mode,
            seed=args.seed,
            strict=args.strict,
            out=args.out,
        )
        pipeline = Pipeline(config)
        logzero.logfile(
            str(config.out_dir / LOG_FILE),
            loglevel=getattr(logging, args.log_level),
            maxBytes=10 ** 7,
            backupCount=3,
        )
        summary = pipeline.run(args.command)
    except SilicError as exception:
        message = str(exception).replace("\\", "\\\\").replace('"', '\\"').replace("\n", " ")
        print('silic-error kind={} message="{}"'.format(exception.kind, message), file=sys.stderr)
        return 2
    finally:
        logzero.logfile(None)
    logger.info("%s done: %s", args.command, summary)
    return 0
