from .classification import ClassificationReport, classification_report, f1_from_precision_recall
from .policy import expert_policy, floor_policy, kl_policy_divergence, l1_policy_distance
