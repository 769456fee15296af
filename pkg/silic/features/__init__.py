from .extraction import MobilityFeatures, build_feature_matrix, extract_features
from .names import FEATURE_COLUMNS, FEATURE_UNITS
from .selection import (
    anova_f_scores,
    encode_housing,
    select_top_features,
    selection_threshold,
    split_persons,
)
