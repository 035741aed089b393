from .boxes import (
    DEFAULT_PAD_FRACTION,
    BoundingBox,
    Detection,
    GroundTruthBox,
    clamp_box,
    crop_rois,
    iou,
    pad_box,
)
from .taxonomy import ArticleTaxonomy, DEFAULT_TAXONOMY, load_taxonomy, save_taxonomy
from .matching import match_detections
from .metrics import (
    DetectionEvalResult,
    average_precision,
    evaluate_detections,
    mean_average_precision,
)
from .detectors import (
    DetectorContract,
    GridDetector,
    GridDetectorConfig,
    ReplayDetector,
    load_grid_detector,
    save_grid_detector,
    train_grid_detector,
)
from .io import (
    load_detections_file,
    load_gt_manifest,
    save_detections_file,
    save_gt_manifest,
)

__all__ = [
    "ArticleTaxonomy",
    "BoundingBox",
    "DEFAULT_PAD_FRACTION",
    "DEFAULT_TAXONOMY",
    "Detection",
    "DetectionEvalResult",
    "DetectorContract",
    "GridDetector",
    "GridDetectorConfig",
    "GroundTruthBox",
    "ReplayDetector",
    "average_precision",
    "clamp_box",
    "crop_rois",
    "evaluate_detections",
    "iou",
    "load_detections_file",
    "load_grid_detector",
    "load_gt_manifest",
    "load_taxonomy",
    "match_detections",
    "mean_average_precision",
    "pad_box",
    "save_detections_file",
    "save_grid_detector",
    "save_gt_manifest",
    "save_taxonomy",
    "train_grid_detector",
]
