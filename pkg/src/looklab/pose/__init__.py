from .labels import POSE_INDEX, POSE_ORDER, PoseLabel, parse_pose_label
from .metrics import ConfusionMatrix, confusion_matrix, precision_recall_per_class
from .classifier import (
    PoseModel,
    PoseModelConfig,
    TINY_POSE_CONFIG,
    classify_pose,
    evaluate_pose_model,
    load_pose_dataset,
    load_pose_model,
    save_pose_model,
    train_pose_model,
)

__all__ = [
    "ConfusionMatrix",
    "POSE_INDEX",
    "POSE_ORDER",
    "PoseLabel",
    "PoseModel",
    "PoseModelConfig",
    "TINY_POSE_CONFIG",
    "classify_pose",
    "confusion_matrix",
    "evaluate_pose_model",
    "load_pose_dataset",
    "load_pose_model",
    "parse_pose_label",
    "precision_recall_per_class",
    "save_pose_model",
    "train_pose_model",
]
