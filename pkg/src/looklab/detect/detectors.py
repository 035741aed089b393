"""Detector contract and the two shipped implementations.

The contract hides the detection backend: a fixture/replay detector that
serves precomputed boxes (fully concurrent), and a trainable single-stage
grid detector sized for synthetic desk-scale data.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping, Protocol, Sequence, runtime_checkable

import numpy as np
import torch
from torch import nn

from .. import imageio
from ..nets import seed_torch
from .boxes import BoundingBox, Detection, GroundTruthBox, clamp_box, iou

CHECKPOINT_FORMAT = "looklab.detector/1"


@runtime_checkable
class DetectorContract(Protocol):
    """Anything that maps an image to a list of detections."""

    name: str
    version: str

    def detect(self, image: np.ndarray, image_ref: str | None = None) -> list[Detection]:
        ...


class ReplayDetector:
    """Serves precomputed detections keyed by image reference.

    Stateless after construction, so concurrent calls are safe.
    """

    def __init__(self, detections: Mapping[str, Sequence[Detection]],
                 name: str = "replay", version: str = "1"):
        self._detections = {k: list(v) for k, v in detections.items()}
        self.name = name
        self.version = version

    @property
    def detections(self) -> dict[str, list[Detection]]:
        return {k: list(v) for k, v in self._detections.items()}

    def detect(self, image: np.ndarray, image_ref: str | None = None) -> list[Detection]:
        if image_ref is None:
            raise ValueError("replay detector needs an image_ref to look up detections")
        return list(self._detections.get(image_ref, []))


# ---------------------------------------------------------------------------
# Trainable single-stage grid detector


@dataclass(frozen=True)
class GridDetectorConfig:
    classes: tuple[str, ...]
    input_size: int = 64
    grid: int = 8
    conf_threshold: float = 0.35
    nms_iou: float = 0.45

    @property
    def cell_px(self) -> int:
        return self.input_size // self.grid


class _GridNet(nn.Module):
    """Conv trunk with stride 8, then a 1x1 head predicting per cell:
    objectness, box offsets (cx, cy, w, h) and class logits."""

    def __init__(self, num_classes: int):
        super().__init__()
        def block(cin, cout):
            return [nn.Conv2d(cin, cout, 3, padding=1, bias=False),
                    nn.BatchNorm2d(cout), nn.ReLU(inplace=True), nn.MaxPool2d(2)]

        self.trunk = nn.Sequential(*block(3, 24), *block(24, 48), *block(48, 96))
        self.head = nn.Conv2d(96, 5 + num_classes, kernel_size=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.head(self.trunk(x))


def _nms(dets: list[Detection], nms_iou: float) -> list[Detection]:
    """Greedy per-class non-maximum suppression, highest score first."""
    kept: list[Detection] = []
    for det in sorted(dets, key=lambda d: -d.score):
        if all(d.article_type != det.article_type or iou(d.box, det.box) < nms_iou
               for d in kept):
            kept.append(det)
    return kept


class GridDetector:
    """Trained single-stage detector handle."""

    def __init__(self, net: _GridNet, config: GridDetectorConfig):
        self.net = net.eval()
        self.config = config
        self.name = "grid"
        self.version = "1"

    @torch.no_grad()
    def detect(self, image: np.ndarray, image_ref: str | None = None) -> list[Detection]:
        cfg = self.config
        h, w = image.shape[:2]
        resized = imageio.resize_image(image, (cfg.input_size, cfg.input_size))
        x = torch.from_numpy(imageio.to_float_chw(resized))[None]
        out = self.net(x)[0].numpy()  # (5+C, grid, grid)
        obj = 1.0 / (1.0 + np.exp(-out[0]))
        boxes = 1.0 / (1.0 + np.exp(-out[1:5]))
        cls_scores = np.exp(out[5:] - out[5:].max(axis=0, keepdims=True))
        cls_scores /= cls_scores.sum(axis=0, keepdims=True)

        scale_x = w / cfg.input_size
        scale_y = h / cfg.input_size
        dets: list[Detection] = []
        for row in range(cfg.grid):
            for col in range(cfg.grid):
                if obj[row, col] < cfg.conf_threshold:
                    continue
                cx = (col + boxes[0, row, col]) * cfg.cell_px
                cy = (row + boxes[1, row, col]) * cfg.cell_px
                bw = boxes[2, row, col] * cfg.input_size
                bh = boxes[3, row, col] * cfg.input_size
                if bw <= 1 or bh <= 1:
                    continue
                raw = BoundingBox(
                    (cx - bw / 2) * scale_x, (cy - bh / 2) * scale_y,
                    (cx + bw / 2) * scale_x, (cy + bh / 2) * scale_y,
                )
                clamped = clamp_box(raw, w, h)
                if clamped is None:
                    continue
                k = int(np.argmax(cls_scores[:, row, col]))
                score = float(obj[row, col] * cls_scores[k, row, col])
                dets.append(Detection(box=clamped, article_type=cfg.classes[k],
                                      score=min(score, 1.0)))
        return sorted(_nms(dets, cfg.nms_iou), key=lambda d: -d.score)


def train_grid_detector(dataset: Iterable[tuple[np.ndarray, Sequence[GroundTruthBox]]],
                        config: GridDetectorConfig,
                        epochs: int = 40,
                        batch_size: int = 16,
                        learning_rate: float = 1e-3,
                        seed: int = 0) -> GridDetector:
    """Train on (image, ground-truth boxes) pairs.

    Each box is assigned to the grid cell holding its center; the loss is
    objectness BCE over all cells plus box MSE and class CE on positive cells.
    """
    samples = [(img, list(gts)) for img, gts in dataset]
    if not samples:
        raise ValueError("empty detector training dataset")
    class_index = {c: i for i, c in enumerate(config.classes)}
    for _, gts in samples:
        for gt in gts:
            if gt.article_type not in class_index:
                raise ValueError(f"ground truth class {gt.article_type!r} not in config.classes")

    cfg = config
    n = len(samples)
    images = np.zeros((n, 3, cfg.input_size, cfg.input_size), dtype=np.float32)
    obj_t = np.zeros((n, cfg.grid, cfg.grid), dtype=np.float32)
    box_t = np.zeros((n, 4, cfg.grid, cfg.grid), dtype=np.float32)
    cls_t = np.zeros((n, cfg.grid, cfg.grid), dtype=np.int64)
    for i, (img, gts) in enumerate(samples):
        h, w = img.shape[:2]
        images[i] = imageio.to_float_chw(imageio.resize_image(img, (cfg.input_size, cfg.input_size)))
        for gt in gts:
            sx = cfg.input_size / w
            sy = cfg.input_size / h
            cx = (gt.box.x_min + gt.box.x_max) / 2 * sx
            cy = (gt.box.y_min + gt.box.y_max) / 2 * sy
            col = min(int(cx / cfg.cell_px), cfg.grid - 1)
            row = min(int(cy / cfg.cell_px), cfg.grid - 1)
            obj_t[i, row, col] = 1.0
            box_t[i, 0, row, col] = cx / cfg.cell_px - col
            box_t[i, 1, row, col] = cy / cfg.cell_px - row
            box_t[i, 2, row, col] = min(gt.box.width * sx / cfg.input_size, 1.0)
            box_t[i, 3, row, col] = min(gt.box.height * sy / cfg.input_size, 1.0)
            cls_t[i, row, col] = class_index[gt.article_type]

    seed_torch(seed)
    rng = np.random.default_rng(seed)
    net = _GridNet(num_classes=len(cfg.classes))
    opt = torch.optim.Adam(net.parameters(), lr=learning_rate)
    # positive cells are rare (a few per image); upweight them
    bce = nn.BCEWithLogitsLoss(pos_weight=torch.tensor(8.0))
    ce = nn.CrossEntropyLoss(reduction="sum")
    net.train()
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            xb = torch.from_numpy(images[idx])
            obj_b = torch.from_numpy(obj_t[idx])
            box_b = torch.from_numpy(box_t[idx])
            cls_b = torch.from_numpy(cls_t[idx])
            opt.zero_grad()
            out = net(xb)
            loss = bce(out[:, 0], obj_b)
            mask = obj_b > 0.5
            num_pos = int(mask.sum())
            if num_pos:
                pred_box = torch.sigmoid(out[:, 1:5])
                box_err = ((pred_box - box_b) ** 2).sum(dim=1)[mask].sum() / num_pos
                cls_logits = out[:, 5:].permute(0, 2, 3, 1)[mask]
                cls_err = ce(cls_logits, cls_b[mask]) / num_pos
                loss = loss + 10.0 * box_err + cls_err
            loss.backward()
            opt.step()
    return GridDetector(net, cfg)


def save_grid_detector(detector: GridDetector, path: str | os.PathLike) -> None:
    cfg = asdict(detector.config)
    cfg["classes"] = list(cfg["classes"])
    torch.save({"format": CHECKPOINT_FORMAT, "config": cfg,
                "state": detector.net.state_dict()}, path)


def load_grid_detector(path: str | os.PathLike) -> GridDetector:
    blob = torch.load(path, map_location="cpu", weights_only=True)
    if blob.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"not a detector checkpoint: {path}")
    cfg_raw = dict(blob["config"])
    cfg_raw["classes"] = tuple(cfg_raw["classes"])
    config = GridDetectorConfig(**cfg_raw)
    net = _GridNet(num_classes=len(config.classes))
    net.load_state_dict(blob["state"])
    return GridDetector(net, config)
