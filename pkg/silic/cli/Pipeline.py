import dataclasses
import json

import numpy as np
import pandas as pd
from logzero import logger

from ..ccr.ContextProfile import read_context_file
from ..ccr.names import TASKS, get_task
from ..ccr.Predictor import Predictor
from ..diary.DiaryReader import DiaryReader
from ..diary.Trajectory import read_trajectories
from ..diary.utils import (
    diary_to_trajectories,
    dynamics_from_dict,
    dynamics_to_dict,
    estimate_empirical_dynamics,
    filter_participants,
    group_by_person,
    render_diary_text,
)
from ..errors import InvalidConfigError, InvalidLabelsError, PreconditionError, SilicError
from ..features.extraction import build_feature_matrix
from ..features.names import FEATURE_COLUMNS, FEATURE_UNITS
from ..features.selection import (
    anova_f_scores,
    encode_housing,
    select_top_features,
    selection_threshold,
    split_persons,
)
from ..guidance.ExchangeLog import ExchangeLog, read_exchange_log
from ..guidance.RemoteGuidanceProvider import RemoteGuidanceProvider
from ..guidance.ReplayGuidanceProvider import ReplayGuidanceProvider
from ..guidance.ScriptedGuidanceProvider import ScriptedGuidanceProvider
from ..irl.BatchTrainer import BatchTrainer, PersonData
from ..irl.IRLTrainer import TrainedModel
from ..JsonlWriter import JsonlWriter
from ..mdp.StateSpace import build_state_space
from ..metrics.classification import classification_report
from ..synth.SyntheticAgent import generate_agent, sample_trajectories
from ..utils import make_rng

COMMANDS = ("ingest", "train", "predict", "evaluate", "synth", "ablate")

TRAJECTORIES = "trajectories.jsonl"
DYNAMICS = "dynamics.json"
DIARIES = "diaries.jsonl"
FEATURES = "features.csv"
MODELS = "models.jsonl"
ITERATIONS = "iterations.jsonl"
PREDICTIONS = "predictions.csv"
METRICS = "metrics.json"
SELECTION = "selection.json"
SYNTH_MANIFEST = "synth_manifest.json"
RECOVERY = "recovery.json"
ABLATION = "ablation.json"

RECOVERY_BOUND = 0.5
ABLATION_CELLS = [
    ("guided", "guided"),
    ("guided", "gradient-only"),
    ("zeros", "guided"),
    ("zeros", "gradient-only"),
]
INCOME_NOTE = "income is household income used as a proxy for the individual"


class Pipeline(object):
    r"""Runs one CLI command against a RunConfig and persists its artifacts.

    Every artifact carries the config hash and the seed. Commands that need
    earlier results read them from the output directory, running ``ingest``
    first when its cache is missing.
    """

    def __init__(self, config):
        self.config = config
        self.out = config.out_dir
        self.out.mkdir(parents=True, exist_ok=True)
        self.space = build_state_space(config.n_max)
        self.failures = 0

    def run(self, command):
        if command not in COMMANDS:
            raise ValueError("unknown command {!r}".format(command))
        logger.info("silic %s, config %s, seed %d", command, self.config.hash, self.config.seed)
        summary = getattr(self, command)()
        if self.failures:
            logger.warning("%s finished with %d failures", command, self.failures)
        return summary

    # provenance

    def _stamp(self, doc):
        stamped = dict(doc)
        stamped["config_hash"] = self.config.hash
        stamped["seed"] = self.config.seed
        return stamped

    def _write_json(self, name, doc):
        with open(self.out / name, "w", encoding="utf-8") as stream:
            json.dump(self._stamp(doc), stream, indent=2)
            stream.write("\n")

    def _write_jsonl(self, name, records):
        with JsonlWriter(self.out / name) as writer:
            for record in records:
                writer.write(self._stamp(record))

    def _write_csv(self, name, frame, **meta):
        frame.to_csv(self.out / name, index=False)
        self._write_json(name + ".meta.json", dict(columns=list(frame.columns), **meta))

    def _read_jsonl(self, name):
        if not (self.out / name).exists():
            raise PreconditionError("{} is missing from {}".format(name, self.out))
        with open(self.out / name, encoding="utf-8") as stream:
            return [json.loads(line) for line in stream if line.strip()]

    # providers

    def _exchange_log(self, name):
        return ExchangeLog(self.out / name, mode="w")

    def _provider(self, exchange_log):
        settings = self.config.provider
        if settings.kind == "scripted":
            return ScriptedGuidanceProvider(self.space, exchange_log)
        if settings.kind == "replay":
            return ReplayGuidanceProvider(self._replayed, self.space, exchange_log)
        return RemoteGuidanceProvider(
            settings.base_url,
            settings.model,
            space=self.space,
            exchange_log=exchange_log,
            concurrency=settings.concurrency,
            max_attempts=settings.max_attempts,
            backoff_factor=settings.backoff_factor,
            timeout=settings.timeout,
        )

    def _open_guidance(self, log_name):
        r"""Exchange log plus provider; a replay file is read before the log is truncated."""
        settings = self.config.provider
        if settings.kind == "replay":
            if settings.replay_log is None:
                raise InvalidConfigError("replay provider needs [provider] replay_log")
            with open(settings.replay_log, encoding="utf-8") as stream:
                self._replayed = read_exchange_log(stream)
        exchange_log = self._exchange_log(log_name)
        return exchange_log, self._provider(exchange_log)

    # ingest

    def _read_diary(self):
        self.config.require("diary")
        with open(self.config.paths.diary, encoding="utf-8") as stream:
            parsed = DiaryReader(strict=self.config.strict).read(stream)
        self.failures += len(parsed.row_errors)
        return filter_participants(parsed.records)

    def ingest(self):
        records = self._read_diary()
        persons = {}
        for person_id, person_records in group_by_person(records).items():
            try:
                trajectories = diary_to_trajectories(person_records, self.config.n_max)
                dynamics = estimate_empirical_dynamics(trajectories, self.config.n_max)
            except SilicError as exception:
                if self.config.strict:
                    raise
                logger.warning("person %s skipped: %s", person_id, exception)
                self.failures += 1
                continue
            persons[person_id] = (person_records, trajectories, dynamics)

        self._write_jsonl(
            TRAJECTORIES,
            [trajectory.to_dict() for p in persons.values() for trajectory in p[1]],
        )
        self._write_json(
            DYNAMICS,
            {"persons": {pid: dynamics_to_dict(p[2]) for pid, p in persons.items()}},
        )
        self._write_jsonl(
            DIARIES,
            [
                {"person_id": pid, "diary_text": render_diary_text(p[0])}
                for pid, p in persons.items()
            ],
        )

        kept = [record for pid, p in persons.items() for record in p[0]]
        contexts = self._contexts() if self.config.paths.context else None
        features = build_feature_matrix(kept, contexts, self.config.n_max)
        self._write_csv(FEATURES, features, units=FEATURE_UNITS)

        logger.info("ingested %d persons", len(persons))
        return {"persons": len(persons), "failures": self.failures}

    def _load_persons(self):
        if not all((self.out / name).exists() for name in (TRAJECTORIES, DYNAMICS, DIARIES)):
            self.ingest()
        with open(self.out / TRAJECTORIES, encoding="utf-8") as stream:
            trajectories = read_trajectories(stream)
        with open(self.out / DYNAMICS, encoding="utf-8") as stream:
            dynamics = json.load(stream)["persons"]
        diaries = {doc["person_id"]: doc["diary_text"] for doc in self._read_jsonl(DIARIES)}

        by_person = {}
        for trajectory in trajectories:
            by_person.setdefault(trajectory.person_id, []).append(trajectory)
        return {
            person_id: PersonData(
                by_person[person_id],
                dynamics_from_dict(dynamics[person_id]),
                diaries.get(person_id),
            )
            for person_id in sorted(by_person)
        }

    # train

    def _training_config(self, **changes):
        return dataclasses.replace(self.config.training, **changes)

    def _train(self, persons, training, log_name):
        exchange_log, provider = self._open_guidance(log_name)
        with exchange_log:
            result = BatchTrainer(provider, training, self.config.concurrency).train(persons)
        self.failures += len(result.failures)
        return result

    def train(self):
        persons = self._load_persons()
        result = self._train(persons, self.config.training, "exchanges.jsonl")
        self._write_jsonl(MODELS, [model.to_dict() for model in result.models])
        self._write_jsonl(
            ITERATIONS, [record for model in result.models for record in model.history]
        )
        return {"trained": len(result.models), "failures": len(result.failures)}

    # predict

    def _contexts(self):
        self.config.require("context")
        with open(self.config.paths.context, encoding="utf-8") as stream:
            return read_context_file(stream)

    def predict(self):
        contexts = self._contexts()
        models = [TrainedModel.from_dict(doc) for doc in self._read_jsonl(MODELS)]

        rows = []
        exchange_log, provider = self._open_guidance("predict_exchanges.jsonl")
        with exchange_log:
            for attribute in self.config.predict.attributes:
                predictor = Predictor(
                    provider,
                    get_task(attribute),
                    self.config.predict.mode,
                    self.config.provider.concurrency,
                )
                predictions = predictor.predict_batch(models, contexts)
                rows.extend(prediction.to_row() for prediction in predictions)

        frame = pd.DataFrame(
            rows,
            columns=[
                "person_id",
                "attribute",
                "mode",
                "label_index",
                "label_name",
                "unresolved",
                "exchange_id",
                "exchange_attempt",
            ],
        )
        n_unresolved = int(frame["unresolved"].sum()) if len(frame) else 0
        self.failures += n_unresolved
        self._write_csv(PREDICTIONS, frame, unresolved=n_unresolved, notes=[INCOME_NOTE])
        return {"predictions": len(frame), "unresolved": n_unresolved}

    # evaluate

    def evaluate(self):
        self.config.require("labels")
        labels = pd.read_csv(self.config.paths.labels, dtype={"person_id": str})
        if not (self.out / PREDICTIONS).exists():
            raise PreconditionError("{} is missing from {}".format(PREDICTIONS, self.out))
        predictions = pd.read_csv(
            self.out / PREDICTIONS, dtype={"person_id": str, "label_name": str}
        )

        reports = []
        for (attribute, mode), group in predictions.groupby(["attribute", "mode"], sort=True):
            if attribute not in labels.columns:
                logger.warning("no ground truth column for %s", attribute)
                continue
            task = get_task(attribute)
            resolved = group[group["unresolved"] == 0]
            merged = resolved.merge(
                labels[["person_id", attribute]].dropna(), on="person_id", how="inner"
            )
            report = classification_report(
                merged[attribute].astype(int).to_numpy(),
                merged["label_index"].astype(int).to_numpy(),
                task.classes,
            )
            doc = {"attribute": attribute, "mode": mode}
            doc.update(report.to_dict())
            doc["n_unresolved"] = int(len(group) - len(resolved))
            doc["n_without_truth"] = int(len(resolved) - len(merged))
            reports.append(doc)
        self._write_json(METRICS, {"reports": reports, "notes": [INCOME_NOTE]})

        selection = None
        if self.config.paths.diary is not None:
            selection = self._select_features(labels)
            self._write_json(SELECTION, selection)
        return {"reports": len(reports), "selection": selection is not None}

    def _select_features(self, labels):
        if not (self.out / FEATURES).exists():
            self.ingest()
        features = pd.read_csv(self.out / FEATURES, dtype={"person_id": str})
        candidates = [c for c in features.columns if c != "person_id"]

        selection = {
            "percentile": self.config.features.percentile,
            "units": FEATURE_UNITS,
            "attributes": {},
        }
        for attribute in [c for c in labels.columns if c in TASKS]:
            merged = features.merge(
                labels[["person_id", attribute]].dropna(), on="person_id", how="inner"
            )
            train_ids, test_ids = split_persons(
                merged["person_id"],
                make_rng(self.config.seed, "split"),
                self.config.features.train_fraction,
            )
            train = merged[merged["person_id"].isin(train_ids)]
            values = encode_housing(train[candidates])
            values = values.fillna(values.mean()).fillna(0.0)
            try:
                scores = anova_f_scores(values, train[attribute].astype(int).to_numpy())
            except InvalidLabelsError as exception:
                logger.warning("no feature selection for %s: %s", attribute, exception)
                selection["attributes"][attribute] = {"error": str(exception)}
                continue
            selection["attributes"][attribute] = {
                "retained": select_top_features(scores, self.config.features.percentile),
                "threshold": selection_threshold(scores, self.config.features.percentile),
                "scores": {name: _json_float(v) for name, v in scores.items()},
                "n_train": len(train_ids),
                "n_test": len(test_ids),
                "mobility_features": [c for c in FEATURE_COLUMNS if c in candidates],
            }
        return selection

    # synthetic suite

    def _agents(self, training):
        n_days = self.config.synth.n_days
        seeds = [self.config.seed + i for i in range(self.config.synth.n_agents)]
        agents = [generate_agent(seed, training, self.space) for seed in seeds]
        persons = {
            agent.person_id: PersonData(
                sample_trajectories(agent, n_days, agent.seed), agent.mdp
            )
            for agent in agents
        }
        return agents, persons

    def _synth_training(self, max_iters):
        return self._training_config(
            alpha=self.config.synth.alpha,
            gradient=self.config.synth.gradient,
            l2=self.config.synth.l2,
            max_iters=max_iters,
            horizon=self.space.n_hours,
        )

    def synth(self):
        training = self._synth_training(self.config.synth.max_iters)
        agents, persons = self._agents(training)
        result = self._train(persons, training, "synth_exchanges.jsonl")
        models = {model.person_id: model for model in result.models}

        rows = []
        for agent in agents:
            model = models.get(agent.person_id)
            if model is None:
                continue
            initial_kl = agent.recovery_kl(model.initial_theta, training)
            final_kl = agent.recovery_kl(model.theta, training)
            initial_training_kl = model.history[0]["kl"] if model.history else model.final_kl
            rows.append(
                {
                    "seed": agent.seed,
                    "person_id": agent.person_id,
                    "initial_kl": initial_kl,
                    "final_kl": final_kl,
                    "within_bound": bool(final_kl <= RECOVERY_BOUND * initial_kl),
                    "initial_training_kl": initial_training_kl,
                    "final_training_kl": model.final_kl,
                    "iterations": model.iterations,
                    "convergence_reason": model.convergence_reason,
                }
            )

        mean_initial = float(np.mean([r["initial_kl"] for r in rows])) if rows else float("nan")
        mean_final = float(np.mean([r["final_kl"] for r in rows])) if rows else float("nan")
        self._write_json(
            SYNTH_MANIFEST,
            {
                "seeds": [agent.seed for agent in agents],
                "n_days": self.config.synth.n_days,
                "space": dict(zip(("n_max", "n_hours", "n_activities"), self.space.shape)),
                "training": training.to_dict(),
                "provider": self.config.provider.kind,
                "expected_bounds": {
                    "final_over_initial_kl": RECOVERY_BOUND,
                    "agents_within_bound": max(0, len(agents) - len(agents) // 10),
                },
            },
        )
        self._write_json(
            RECOVERY,
            {
                "agents": rows,
                "mean_initial_kl": mean_initial,
                "mean_final_kl": mean_final,
                "n_within_bound": sum(r["within_bound"] for r in rows),
                "mean_within_bound": bool(mean_final <= RECOVERY_BOUND * mean_initial),
            },
        )
        return {"agents": len(rows), "failures": len(result.failures)}

    # ablation grid

    def ablate(self):
        if self.config.ablate.source == "synthetic":
            base = self._synth_training(self.config.ablate.max_iters)
            agents, persons = self._agents(base)
        else:
            base = self._training_config(max_iters=self.config.ablate.max_iters)
            agents, persons = [], self._load_persons()

        cells = []
        for init, updates in ABLATION_CELLS:
            training = dataclasses.replace(
                base, guided_init=init == "guided", guided_updates=updates == "guided"
            )
            log_name = "ablate_{}_{}_exchanges.jsonl".format(init, updates)
            result = self._train(persons, training, log_name)
            cell = {
                "init": init,
                "updates": updates,
                "mean_kl": _mean([m.final_kl for m in result.models]),
                "mean_l1": _mean([m.final_l1 for m in result.models]),
                "n_persons": len(result.models),
                "n_failed": len(result.failures),
            }
            if agents:
                models = {model.person_id: model for model in result.models}
                cell["mean_recovery_kl"] = _mean(
                    [
                        agent.recovery_kl(models[agent.person_id].theta, training)
                        for agent in agents
                        if agent.person_id in models
                    ]
                )
            cells.append(cell)

        by_cell = {(c["init"], c["updates"]): c["mean_kl"] for c in cells}
        ordering = [
            by_cell[("guided", "guided")],
            by_cell[("guided", "gradient-only")],
            by_cell[("zeros", "gradient-only")],
        ]
        self._write_json(
            ABLATION,
            {
                "source": self.config.ablate.source,
                "training": base.to_dict(),
                "cells": cells,
                "ordering_holds": bool(ordering[0] <= ordering[1] <= ordering[2]),
            },
        )
        return {"cells": len(cells)}


def _mean(values):
    return float(np.mean(values)) if values else float("nan")


def _json_float(value):
    return None if not np.isfinite(value) else float(value)
