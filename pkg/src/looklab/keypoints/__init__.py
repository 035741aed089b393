from .schema import COCO_17, Keypoint, KeypointSchema, KeypointSet
from .heatmaps import (
    Heatmap,
    HeatmapShapeError,
    decode_heatmaps,
    heatmap_l2_loss,
    heatmap_l2_loss_grad,
    make_target_heatmap,
)
from .fullshot import DEFAULT_CONF_THRESHOLD, SchemaMismatchError, is_full_shot
from .model import (
    ConfigurationError,
    KeypointModel,
    KeypointModelConfig,
    KeypointSample,
    TINY_KEYPOINT_CONFIG,
    load_keypoint_dataset,
    load_keypoint_model,
    save_keypoint_model,
    train_keypoint_model,
)

__all__ = [
    "COCO_17",
    "ConfigurationError",
    "DEFAULT_CONF_THRESHOLD",
    "Heatmap",
    "HeatmapShapeError",
    "Keypoint",
    "KeypointModel",
    "KeypointModelConfig",
    "KeypointSample",
    "KeypointSchema",
    "KeypointSet",
    "SchemaMismatchError",
    "TINY_KEYPOINT_CONFIG",
    "decode_heatmaps",
    "heatmap_l2_loss",
    "heatmap_l2_loss_grad",
    "is_full_shot",
    "load_keypoint_dataset",
    "load_keypoint_model",
    "make_target_heatmap",
    "save_keypoint_model",
    "train_keypoint_model",
]
