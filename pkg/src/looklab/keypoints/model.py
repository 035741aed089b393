"""Heatmap-regression keypoint model: residual backbone, deconvolution head,
1x1 output conv. Train/infer plus checkpoint IO.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np
import torch
from torch import nn

from .. import imageio
from ..nets import ResNetBackbone, deconv_head, seed_torch
from .heatmaps import decode_heatmaps
from .schema import COCO_17, KeypointSchema, KeypointSet

CHECKPOINT_FORMAT = "looklab.keypoints/1"


class ConfigurationError(ValueError):
    """Bad training configuration or unusable dataset."""


@dataclass(frozen=True)
class KeypointModelConfig:
    """Architecture knobs. The deconv defaults (3 layers, 256 filters,
    4x4 kernel, stride 2) are the standard configuration; fixtures shrink
    base_width/deconv_filters for CPU-speed training."""

    backbone_depth: int = 50
    base_width: int = 64
    deconv_layers: int = 3
    deconv_filters: int = 256
    deconv_kernel: int = 4
    deconv_stride: int = 2
    heatmap_sigma: float = 2.0
    input_size: int = 256

    def __post_init__(self):
        if self.deconv_layers < 1:
            raise ConfigurationError("deconv_layers must be >= 1")
        if self.deconv_stride < 1:
            raise ConfigurationError("deconv_stride must be >= 1")
        if self.heatmap_sigma <= 0:
            raise ConfigurationError("heatmap_sigma must be > 0")

    @property
    def heatmap_stride(self) -> int:
        backbone_stride = 32
        up = self.deconv_stride**self.deconv_layers
        if backbone_stride % up != 0:
            raise ConfigurationError(
                f"deconv stack upsamples {up}x which does not divide backbone stride {backbone_stride}"
            )
        return backbone_stride // up


TINY_KEYPOINT_CONFIG = KeypointModelConfig(
    backbone_depth=18, base_width=8, deconv_filters=32, input_size=64
)


class KeypointNet(nn.Module):
    def __init__(self, config: KeypointModelConfig, num_keypoints: int):
        super().__init__()
        self.backbone = ResNetBackbone(config.backbone_depth, config.base_width)
        self.deconv = deconv_head(
            self.backbone.out_channels,
            config.deconv_layers,
            config.deconv_filters,
            config.deconv_kernel,
            config.deconv_stride,
        )
        self.head = nn.Conv2d(config.deconv_filters, num_keypoints, kernel_size=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.head(self.deconv(self.backbone(x)))


@dataclass
class KeypointSample:
    image: np.ndarray  # (H, W, 3) uint8
    keypoints: np.ndarray  # (k, 3): x, y, visible

    def __post_init__(self):
        self.keypoints = np.asarray(self.keypoints, dtype=np.float64)
        if self.keypoints.ndim != 2 or self.keypoints.shape[1] != 3:
            raise ConfigurationError(f"keypoints must be (k, 3), got {self.keypoints.shape}")


def load_keypoint_dataset(manifest_path: str | os.PathLike,
                          schema: KeypointSchema = COCO_17) -> list[KeypointSample]:
    """Read a JSONL manifest of {image_path, keypoints: [[x, y, visible], ...]}."""
    from ..manifests import read_jsonl

    base = os.path.dirname(os.fspath(manifest_path))
    samples = []
    for rec in read_jsonl(manifest_path):
        path = rec["image_path"]
        if not os.path.isabs(path):
            path = os.path.join(base, path)
        kps = np.asarray(rec["keypoints"], dtype=np.float64)
        if kps.shape != (len(schema), 3):
            raise ConfigurationError(
                f"{rec['image_path']}: expected {len(schema)} keypoints with visibility, got {kps.shape}"
            )
        samples.append(KeypointSample(image=imageio.load_image(path), keypoints=kps))
    return samples


class KeypointModel:
    """Trained model handle; safe for concurrent read-only inference."""

    def __init__(self, net: KeypointNet, config: KeypointModelConfig, schema: KeypointSchema):
        self.net = net.eval()
        self.config = config
        self.schema = schema

    @torch.no_grad()
    def predict_heatmaps(self, image: np.ndarray) -> np.ndarray:
        """Run the network on one image; returns (k, H', W') heatmaps for the
        resized input (side = config.input_size)."""
        size = self.config.input_size
        resized = imageio.resize_image(image, (size, size))
        x = torch.from_numpy(imageio.to_float_chw(resized))[None]
        out = self.net(x)[0].numpy().astype(np.float64)
        return np.clip(out, 0.0, None)

    def infer(self, image: np.ndarray, conf_floor: float = 0.0) -> KeypointSet:
        """Decode keypoints in original-image pixel coordinates."""
        heatmaps = self.predict_heatmaps(image)
        stride = self.config.heatmap_stride
        kps = decode_heatmaps(heatmaps, stride=stride, schema=self.schema,
                              image_size=(self.config.input_size, self.config.input_size))
        h, w = image.shape[:2]
        scale_x = w / self.config.input_size
        scale_y = h / self.config.input_size
        from .schema import Keypoint

        points = {
            name: Keypoint(
                x=min(kp.x * scale_x, w - 1.0),
                y=min(kp.y * scale_y, h - 1.0),
                confidence=kp.confidence if kp.confidence >= conf_floor else 0.0,
            )
            for name, kp in kps.points.items()
        }
        return KeypointSet(points=points)


def _build_targets(samples: Sequence[KeypointSample], config: KeypointModelConfig,
                   schema: KeypointSchema) -> tuple[np.ndarray, np.ndarray]:
    """Resize images and rasterize Gaussian targets (zero grid when invisible)."""
    from .heatmaps import make_target_heatmap

    size = config.input_size
    stride = config.heatmap_stride
    grid = size // stride
    images = np.zeros((len(samples), 3, size, size), dtype=np.float32)
    targets = np.zeros((len(samples), len(schema), grid, grid), dtype=np.float32)
    for i, sample in enumerate(samples):
        h, w = sample.image.shape[:2]
        images[i] = imageio.to_float_chw(imageio.resize_image(sample.image, (size, size)))
        for j, (x, y, visible) in enumerate(sample.keypoints):
            if visible <= 0:
                continue
            # clip so the stride-mapped center stays on the grid
            gx = np.clip(x * size / w, 0, (grid - 1) * stride)
            gy = np.clip(y * size / h, 0, (grid - 1) * stride)
            hm = make_target_heatmap((gx, gy), (grid, grid), config.heatmap_sigma, stride=stride)
            targets[i, j] = hm.values.astype(np.float32)
    return images, targets


def train_keypoint_model(dataset: Iterable[KeypointSample],
                         config: KeypointModelConfig = TINY_KEYPOINT_CONFIG,
                         schema: KeypointSchema = COCO_17,
                         epochs: int = 30,
                         batch_size: int = 16,
                         learning_rate: float = 1e-3,
                         seed: int = 0) -> KeypointModel:
    """Minimize the heatmap L2 loss with Adam. Deterministic for a fixed seed."""
    samples = list(dataset)
    if not samples:
        raise ConfigurationError("empty training dataset")
    for sample in samples:
        if sample.keypoints.shape[0] != len(schema):
            raise ConfigurationError(
                f"sample has {sample.keypoints.shape[0]} keypoints, schema wants {len(schema)}"
            )
    if not any(np.any(s.keypoints[:, 2] > 0) for s in samples):
        raise ConfigurationError("dataset has zero annotated (visible) keypoints")

    seed_torch(seed)
    rng = np.random.default_rng(seed)
    net = KeypointNet(config, num_keypoints=len(schema))
    images, targets = _build_targets(samples, config, schema)
    opt = torch.optim.Adam(net.parameters(), lr=learning_rate)
    loss_fn = nn.MSELoss()
    net.train()
    n = len(samples)
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            xb = torch.from_numpy(images[idx])
            yb = torch.from_numpy(targets[idx])
            opt.zero_grad()
            loss = loss_fn(net(xb), yb)
            loss.backward()
            opt.step()
    return KeypointModel(net, config, schema)


def save_keypoint_model(model: KeypointModel, path: str | os.PathLike) -> None:
    torch.save(
        {
            "format": CHECKPOINT_FORMAT,
            "config": asdict(model.config),
            "schema": {
                "names": list(model.schema.names),
                "head_group": sorted(model.schema.head_group),
                "ankle_group": sorted(model.schema.ankle_group),
            },
            "state": model.net.state_dict(),
        },
        path,
    )


def load_keypoint_model(path: str | os.PathLike) -> KeypointModel:
    blob = torch.load(path, map_location="cpu", weights_only=True)
    if blob.get("format") != CHECKPOINT_FORMAT:
        raise ConfigurationError(f"not a keypoint checkpoint: {path}")
    config = KeypointModelConfig(**blob["config"])
    schema = KeypointSchema(
        names=tuple(blob["schema"]["names"]),
        head_group=frozenset(blob["schema"]["head_group"]),
        ankle_group=frozenset(blob["schema"]["ankle_group"]),
    )
    net = KeypointNet(config, num_keypoints=len(schema))
    net.load_state_dict(blob["state"])
    return KeypointModel(net, config, schema)
