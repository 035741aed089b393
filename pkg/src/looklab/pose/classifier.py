"""Five-way pose classifier: a residual network with a softmax head.

The depth-18 residual configuration is the reference architecture; fixtures
shrink base_width so training stays in CPU territory.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np
import torch
from torch import nn

from .. import imageio
from ..nets import ResNetBackbone, seed_torch
from .labels import POSE_ORDER, PoseLabel, parse_pose_label

CHECKPOINT_FORMAT = "looklab.pose/1"


@dataclass(frozen=True)
class PoseModelConfig:
    backbone_depth: int = 18
    base_width: int = 64
    input_size: int = 64


TINY_POSE_CONFIG = PoseModelConfig(backbone_depth=18, base_width=8, input_size=64)


class PoseNet(nn.Module):
    def __init__(self, config: PoseModelConfig, num_classes: int = len(POSE_ORDER)):
        super().__init__()
        self.backbone = ResNetBackbone(config.backbone_depth, config.base_width)
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.fc = nn.Linear(self.backbone.out_channels, num_classes)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        feats = self.pool(self.backbone(x)).flatten(1)
        return self.fc(feats)


class PoseModel:
    """Trained classifier handle; thread-safe for read-only inference."""

    def __init__(self, net: PoseNet, config: PoseModelConfig):
        self.net = net.eval()
        self.config = config

    @torch.no_grad()
    def scores(self, image: np.ndarray) -> np.ndarray:
        """Softmax scores over the five classes in canonical order."""
        size = self.config.input_size
        resized = imageio.resize_image(image, (size, size))
        x = torch.from_numpy(imageio.to_float_chw(resized))[None]
        probs = torch.softmax(self.net(x)[0], dim=0).numpy().astype(np.float64)
        return probs


def classify_pose(image: np.ndarray, model: PoseModel) -> tuple[PoseLabel, float]:
    """Argmax class and its score. Ties fall to the first label in canonical
    order (argmax returns the first maximum)."""
    probs = model.scores(image)
    idx = int(np.argmax(probs))
    return POSE_ORDER[idx], float(probs[idx])


def load_pose_dataset(manifest_path: str | os.PathLike) -> list[tuple[np.ndarray, PoseLabel]]:
    """Read a JSONL manifest of {image_path, pose_label}."""
    from ..manifests import read_jsonl

    base = os.path.dirname(os.fspath(manifest_path))
    samples = []
    for rec in read_jsonl(manifest_path):
        path = rec["image_path"]
        if not os.path.isabs(path):
            path = os.path.join(base, path)
        samples.append((imageio.load_image(path), parse_pose_label(rec["pose_label"])))
    return samples


def train_pose_model(dataset: Iterable[tuple[np.ndarray, PoseLabel]],
                     config: PoseModelConfig = TINY_POSE_CONFIG,
                     epochs: int = 20,
                     batch_size: int = 32,
                     learning_rate: float = 1e-3,
                     seed: int = 0) -> PoseModel:
    samples = list(dataset)
    if not samples:
        raise ValueError("empty pose training dataset")
    seed_torch(seed)
    rng = np.random.default_rng(seed)
    size = config.input_size
    images = np.stack([imageio.to_float_chw(imageio.resize_image(img, (size, size)))
                       for img, _ in samples])
    labels = np.array([POSE_ORDER.index(lbl) for _, lbl in samples], dtype=np.int64)

    net = PoseNet(config)
    opt = torch.optim.Adam(net.parameters(), lr=learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    net.train()
    n = len(samples)
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            opt.zero_grad()
            loss = loss_fn(net(torch.from_numpy(images[idx])), torch.from_numpy(labels[idx]))
            loss.backward()
            opt.step()
    return PoseModel(net, config)


def evaluate_pose_model(model: PoseModel,
                        dataset: Sequence[tuple[np.ndarray, PoseLabel]]):
    """Confusion matrix plus per-class precision/recall on a labeled set."""
    from .metrics import confusion_matrix, precision_recall_per_class

    truths = [lbl for _, lbl in dataset]
    preds = [classify_pose(img, model)[0] for img, _ in dataset]
    cm = confusion_matrix(truths, preds)
    return cm, precision_recall_per_class(cm)


def save_pose_model(model: PoseModel, path: str | os.PathLike) -> None:
    torch.save(
        {"format": CHECKPOINT_FORMAT, "config": asdict(model.config), "state": model.net.state_dict()},
        path,
    )


def load_pose_model(path: str | os.PathLike) -> PoseModel:
    blob = torch.load(path, map_location="cpu", weights_only=True)
    if blob.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"not a pose checkpoint: {path}")
    config = PoseModelConfig(**blob["config"])
    net = PoseNet(config)
    net.load_state_dict(blob["state"])
    return PoseModel(net, config)
