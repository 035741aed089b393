"""Target heatmap construction, the heatmap regression loss, and decoding.

Heatmap grids are indexed ``values[row, col]`` where row is y and col is x;
a point (x, y) in grid units lands on cell ``values[y, x]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .schema import COCO_17, Keypoint, KeypointSchema, KeypointSet


class HeatmapShapeError(ValueError):
    """Predicted and target heatmap stacks disagree in shape or count."""


@dataclass
class Heatmap:
    """One keypoint's score grid plus its downsample factor vs the input image."""

    values: np.ndarray  # (H, W), non-negative
    stride: int = 1

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise HeatmapShapeError(f"heatmap must be 2-D, got shape {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("heatmap values must be finite")
        if np.any(self.values < 0):
            raise ValueError("heatmap values must be non-negative")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")


def make_target_heatmap(point: tuple[float, float], grid: tuple[int, int],
                        sigma: float, stride: int = 1) -> Heatmap:
    """Unnormalized Gaussian bump centered on ``point``.

    ``point`` is (x, y) in input-image pixels; it is mapped onto the grid by
    dividing by ``stride``. The center cell has value exactly 1. ``grid`` is
    (height, width) and ``sigma`` is in grid cells.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    height, width = grid
    cx = point[0] / stride
    cy = point[1] / stride
    if not (0 <= cx <= width - 1 and 0 <= cy <= height - 1):
        raise ValueError(
            f"point {point} maps to grid cell ({cx:.2f}, {cy:.2f}) outside {width}x{height}"
        )
    xs = np.arange(width, dtype=np.float64)
    ys = np.arange(height, dtype=np.float64)[:, None]
    values = np.exp(-((xs - cx) ** 2 + (ys - cy) ** 2) / (2.0 * sigma**2))
    # renormalize so the peak cell is exactly 1 even off cell centers
    values /= values.max()
    return Heatmap(values=values, stride=stride)


def _stack(heatmaps) -> np.ndarray:
    """Accept a (k,H,W) array, a list of Heatmaps, or a list of 2-D arrays."""
    if isinstance(heatmaps, np.ndarray):
        arr = heatmaps.astype(np.float64, copy=False)
        if arr.ndim == 2:
            arr = arr[None]
        if arr.ndim != 3:
            raise HeatmapShapeError(f"expected (k,H,W) heatmaps, got shape {arr.shape}")
        return arr
    grids = [hm.values if isinstance(hm, Heatmap) else np.asarray(hm, dtype=np.float64)
             for hm in heatmaps]
    shapes = {g.shape for g in grids}
    if len(shapes) > 1:
        raise HeatmapShapeError(f"heatmaps disagree in shape: {sorted(shapes)}")
    return np.stack(grids)


def heatmap_l2_loss(predicted, target) -> float:
    """Mean squared element-wise difference over all cells and keypoints."""
    pred = _stack(predicted)
    tgt = _stack(target)
    if pred.shape != tgt.shape:
        raise HeatmapShapeError(f"shape mismatch: predicted {pred.shape} vs target {tgt.shape}")
    return float(np.mean((pred - tgt) ** 2))


def heatmap_l2_loss_grad(predicted, target) -> np.ndarray:
    """Gradient of heatmap_l2_loss w.r.t. the predictions, shape (k, H, W)."""
    pred = _stack(predicted)
    tgt = _stack(target)
    if pred.shape != tgt.shape:
        raise HeatmapShapeError(f"shape mismatch: predicted {pred.shape} vs target {tgt.shape}")
    return 2.0 * (pred - tgt) / pred.size


def decode_heatmaps(heatmaps, stride: int | None = None,
                    schema: KeypointSchema = COCO_17,
                    image_size: tuple[int, int] | None = None) -> KeypointSet:
    """Per keypoint: argmax cell scaled by stride; confidence is the peak
    value clamped to [0, 1].

    Ties break toward the smallest row, then the smallest column. An all-zero
    grid decodes to (0, 0) with confidence 0. ``image_size`` (width, height),
    when given, clamps coordinates to the image bounds.
    """
    stack = _stack(heatmaps)
    if stride is None:
        if isinstance(heatmaps, np.ndarray) or not heatmaps:
            raise ValueError("stride required when heatmaps carry none")
        stride = heatmaps[0].stride if isinstance(heatmaps[0], Heatmap) else 1
    if stack.shape[0] != len(schema):
        raise HeatmapShapeError(
            f"got {stack.shape[0]} heatmaps for a {len(schema)}-keypoint schema"
        )
    points: dict[str, Keypoint] = {}
    for name, grid in zip(schema.names, stack):
        # row-major argmax == smallest row then smallest column on ties
        flat_idx = int(np.argmax(grid))
        row, col = divmod(flat_idx, grid.shape[1])
        x = float(col * stride)
        y = float(row * stride)
        if image_size is not None:
            x = min(x, float(image_size[0] - 1))
            y = min(y, float(image_size[1] - 1))
        conf = float(np.clip(grid[row, col], 0.0, 1.0))
        points[name] = Keypoint(x=x, y=y, confidence=conf)
    return KeypointSet(points=points)
