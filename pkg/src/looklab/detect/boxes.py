"""Axis-aligned boxes, IoU, and padded ROI cropping."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_PAD_FRACTION = 0.05


@dataclass(frozen=True)
class BoundingBox:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(
                f"degenerate box ({self.x_min}, {self.y_min}, {self.x_max}, {self.y_max})"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)


@dataclass(frozen=True)
class Detection:
    box: BoundingBox
    article_type: str
    score: float

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"detection score {self.score} outside [0, 1]")


@dataclass(frozen=True)
class GroundTruthBox:
    box: BoundingBox
    article_type: str


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection area over union area, in [0, 1]."""
    ix = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    iy = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    return inter / (a.area + b.area - inter)


def pad_box(box: BoundingBox, pad_fraction: float) -> BoundingBox:
    """Expand each side by pad_fraction of the box's own extent."""
    if pad_fraction < 0:
        raise ValueError("pad_fraction must be >= 0")
    px = pad_fraction * box.width
    py = pad_fraction * box.height
    return BoundingBox(box.x_min - px, box.y_min - py, box.x_max + px, box.y_max + py)


def clamp_box(box: BoundingBox, width: int, height: int) -> BoundingBox | None:
    """Clamp to image bounds; None when nothing remains."""
    x_min = max(0.0, box.x_min)
    y_min = max(0.0, box.y_min)
    x_max = min(float(width), box.x_max)
    y_max = min(float(height), box.y_max)
    if x_min >= x_max or y_min >= y_max:
        return None
    return BoundingBox(x_min, y_min, x_max, y_max)


def crop_rois(image: np.ndarray, dets: list[Detection],
              pad_fraction: float = DEFAULT_PAD_FRACTION) -> list[tuple[str, np.ndarray]]:
    """Pad each detection box, clamp it to the image, and crop.

    Degenerate post-clamp boxes are skipped with a warning rather than
    failing the batch.
    """
    h, w = image.shape[:2]
    crops = []
    for det in dets:
        clamped = clamp_box(pad_box(det.box, pad_fraction), w, h)
        if clamped is None:
            logger.warning("skipping ROI with empty post-clamp box: %s", det)
            continue
        x0, y0 = int(np.floor(clamped.x_min)), int(np.floor(clamped.y_min))
        x1, y1 = int(np.ceil(clamped.x_max)), int(np.ceil(clamped.y_max))
        crop = image[y0:y1, x0:x1]
        if crop.size == 0:
            logger.warning("skipping ROI with empty pixel extent: %s", det)
            continue
        crops.append((det.article_type, crop))
    return crops
