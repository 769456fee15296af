import io
from pathlib import Path

import numpy as np
import pytest

from silic.ccr import (
    ContextProfile,
    Prediction,
    Predictor,
    build_ablation_prompt,
    build_ccr_prompt,
    build_prediction_prompt,
    get_task,
    predict_batch,
    read_context_file,
    render_label_examples,
)
from silic.errors import InvalidConfigError, PreconditionError, RowError, SchemaError
from silic.guidance import ExchangeLog, ScriptedGuidanceProvider, read_exchange_log
from silic.irl import TrainedModel

GOLDEN = Path(__file__).parent / "golden"
THETA = (np.arange(31) - 15) / 10

CONTEXT_HEADER = (
    "person_id,urban_indicator,population_density,distance_to_transit_m,network_density,"
    "housing_density,residential_proportion,commercial_proportion,educational_proportion,"
    "recreational_proportion,housing_type"
)


def mean_context(**changes):
    values = dict(
        urban_indicator=1,
        population_density=16047.36,
        distance_to_transit_m=270.48,
        network_density=29.03,
        housing_density=9771.24,
        residential_proportion=0.346,
        commercial_proportion=0.130,
        educational_proportion=0.055,
        recreational_proportion=0.054,
        housing_type="single_family",
    )
    values.update(changes)
    return ContextProfile(**values)


def model(person_id, theta=THETA):
    return TrainedModel(person_id, np.asarray(theta), None, 0, 0.0, "max-iters")


def test_golden_ccr_prompt():
    prompt = build_ccr_prompt(THETA, mean_context(), get_task("gender"))
    assert prompt == (GOLDEN / "ccr_gender_prompt.txt").read_text(encoding="utf-8")
    assert "Step 1: Belief Inference" in prompt
    assert "Step 2: Sociodemographic Prediction" in prompt


def test_label_examples():
    assert render_label_examples(2) == "0 or 1"
    assert render_label_examples(3) == "0, 1, or 2"


def test_ablation_prompts_share_inputs():
    context, task = mean_context(urban_indicator=0), get_task("age")
    ccr = build_ccr_prompt(THETA, context, task)
    direct = build_ablation_prompt(THETA, context, task, "direct")
    cot = build_prediction_prompt(THETA, context, task, "cot")
    for prompt in (ccr, direct, cot):
        assert "  - Urban/Rural: rural" in prompt
        assert "  - 2: 65+" in prompt
        assert "(e.g., 0, 1, or 2)" in prompt
    assert "belief" not in direct.lower()
    assert "step by step" in cot
    assert "Belief Inference" not in cot
    with pytest.raises(InvalidConfigError):
        build_ablation_prompt(THETA, context, task, "ccr")


def test_display_names():
    prompt = build_ccr_prompt(THETA, mean_context(), get_task("employment"))
    assert "infer employment status from" in prompt
    assert "  - 1: employed" in prompt
    with pytest.raises(InvalidConfigError):
        get_task("height")


def test_theta_arity_checked():
    with pytest.raises(PreconditionError):
        build_ccr_prompt(THETA[:30], mean_context(), get_task("gender"))


def test_context_profile_validation():
    with pytest.raises(InvalidConfigError):
        mean_context(urban_indicator=2)
    with pytest.raises(InvalidConfigError):
        mean_context(commercial_proportion=1.2)
    with pytest.raises(InvalidConfigError):
        mean_context(population_density=float("nan"))
    with pytest.raises(InvalidConfigError):
        mean_context(housing_type="castle")
    lines = mean_context(housing_type="multi_unit_5_plus").render_lines()
    assert lines[-1] == "  - Housing Type: Multi-Unit (>5)"
    assert lines[1] == "  - Population Density: 16047.36 people per square mile"


def test_read_context_file():
    text = CONTEXT_HEADER + "\n" + "007,1,100.5,20,3,50,0.5,0.2,0.1,0.1,multi_unit_2_4\n"
    profiles = read_context_file(io.StringIO(text))
    assert list(profiles) == ["007"]
    assert profiles["007"].housing_type == "multi_unit_2_4"
    assert profiles["007"].population_density == 100.5

    with pytest.raises(SchemaError):
        read_context_file(io.StringIO("person_id,urban_indicator\n1,1\n"))
    with pytest.raises(RowError):
        bad_row = "p,1,x,20,3,50,0.5,0.2,0.1,0.1,single_family"
        read_context_file(io.StringIO(CONTEXT_HEADER + "\n" + bad_row + "\n"))


def test_transit_distance_column_carries_its_unit():
    legacy = CONTEXT_HEADER.replace("distance_to_transit_m", "distance_to_transit")
    row = "p1,1,16047.36,270.48,29.03,9771.24,0.346,0.13,0.055,0.054,single_family"
    with pytest.raises(SchemaError) as info:
        read_context_file(io.StringIO(legacy + "\n" + row + "\n"))
    assert info.value.column == "distance_to_transit_m"
    [profile] = read_context_file(io.StringIO(CONTEXT_HEADER + "\n" + row + "\n")).values()
    assert "  - Distance to Transit: 270.48 m" in profile.render_lines()


def test_predictor_with_scripted_provider():
    provider = ScriptedGuidanceProvider()
    task = get_task("gender")
    contexts = {"b": mean_context(), "a": mean_context(urban_indicator=0)}
    predictions = Predictor(provider, task, concurrency=2).predict_batch(
        [model("b"), model("a"), model("c")], contexts
    )
    assert [p.person_id for p in predictions] == ["a", "b", "c"]

    expected = provider.label(build_ccr_prompt(THETA, contexts["a"], task), 2)
    assert predictions[0].label_index == expected
    assert predictions[0].label_name == task.classes[expected]
    assert predictions[2].unresolved
    assert predictions[2].error == "context-missing"
    assert predictions[2].to_row()["label_index"] == ""


def test_unparseable_labels_are_unresolved():
    class Silent(object):
        def predict_label(self, prompt, task, person_id=None):
            return None

    [prediction] = predict_batch([model("a")], {"a": mean_context()}, Silent(), get_task("age"))
    assert prediction == Prediction("a", "age", "ccr", None, error="parse-error")
    assert prediction.to_row()["unresolved"] == 1
    assert prediction.exchange_id is None
    assert prediction.to_row()["exchange_attempt"] == ""


def test_predictions_point_at_their_exchanges(tmp_path):
    task = get_task("age")
    with ExchangeLog(tmp_path / "exchanges.jsonl", mode="w") as log:
        provider = ScriptedGuidanceProvider(exchange_log=log)
        predictions = Predictor(provider, task).predict_batch(
            [model("a"), model("b")], {"a": mean_context(), "b": mean_context(urban_indicator=0)}
        )
    with open(tmp_path / "exchanges.jsonl", encoding="utf-8") as stream:
        exchanges = {(e.exchange_id, e.attempt): e for e in read_exchange_log(stream)}

    assert len(exchanges) == 2
    for prediction in predictions:
        exchange = exchanges[(prediction.exchange_id, prediction.exchange_attempt)]
        assert exchange.kind == "ccr"
        assert exchange.person_id == prediction.person_id
        assert exchange.parsed == prediction.label_index
        row = prediction.to_row()
        assert row["exchange_id"] == prediction.exchange_id
        assert row["exchange_attempt"] == 1
