from ..guidance.parsing import parse_label, render_label
from .ContextProfile import ContextProfile, read_context_file
from .names import CONTEXT_COLUMNS, HOUSING_TYPES, MODES, TASKS, AttributeTask, get_task
from .Predictor import Prediction, Predictor, predict_batch
from .prompts import (
    build_ablation_prompt,
    build_ccr_prompt,
    build_prediction_prompt,
    render_inputs,
    render_label_examples,
)
