"""Shared-branch triplet encoder: training, inference, and checkpoint IO.

One encoder network serves all three triplet branches (anchor, positive,
negative see identical weights), so any branch embeds a raw image.
"""

from __future__ import annotations

import json
import os
import struct
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np
import torch
from torch import nn

from .. import imageio
from ..nets import ResNetBackbone, seed_torch
from .losses import TripletLossConfig
from .mining import mine_semi_hard
from .triplets import Triplet

CHECKPOINT_FORMAT = "looklab.embed/1"

# paper-scale embedding width vs what the test fixtures train
PAPER_EMBEDDING_DIM = 2048
FIXTURE_EMBEDDING_DIM = 64


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 5e-5
    batch_size: int = 32
    epochs: int = 30
    seed: int = 0
    backbone_depth: int = 50
    base_width: int = 64
    embedding_dim: int = PAPER_EMBEDDING_DIM
    input_size: int = 64
    semi_hard_mining: bool = False

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.embedding_dim < 1:
            raise ValueError("embedding_dim must be >= 1")


TINY_TRAIN_CONFIG = TrainConfig(
    learning_rate=1e-3,
    backbone_depth=18,
    base_width=8,
    embedding_dim=FIXTURE_EMBEDDING_DIM,
    input_size=32,
)


class EmbeddingNet(nn.Module):
    def __init__(self, config: TrainConfig):
        super().__init__()
        # group norm keeps train and eval numerics identical, which the
        # margin geometry depends on
        self.backbone = ResNetBackbone(config.backbone_depth, config.base_width,
                                       norm="group")
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.fc = nn.Linear(self.backbone.out_channels, config.embedding_dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.fc(self.pool(self.backbone(x)).flatten(1))


class EmbeddingModel:
    """Immutable trained handle; safe to share across inference threads."""

    def __init__(self, net: EmbeddingNet, config: TrainConfig,
                 loss_history: list[float] | None = None):
        self.net = net.eval()
        self.config = config
        self.loss_history = list(loss_history or [])

    @property
    def dim(self) -> int:
        return self.config.embedding_dim

    @torch.no_grad()
    def embed(self, image: np.ndarray) -> np.ndarray:
        size = self.config.input_size
        resized = imageio.resize_image(image, (size, size))
        x = torch.from_numpy(imageio.to_float_chw(resized))[None]
        vec = self.net(x)[0].numpy().astype(np.float32)
        if not np.all(np.isfinite(vec)):
            raise ValueError("embedding contains non-finite values")
        return vec

    @property
    def branches(self) -> dict[str, Callable[[np.ndarray], np.ndarray]]:
        """All three branches are literally the same function (shared weights)."""
        return {"anchor": self.embed, "positive": self.embed, "negative": self.embed}


def embed_image(image: np.ndarray, model: EmbeddingModel) -> np.ndarray:
    """Embed one image through the shared encoder; deterministic per model+input."""
    return model.embed(image)


def _torch_total_loss(a: torch.Tensor, p: torch.Tensor, n: torch.Tensor,
                      cfg: TripletLossConfig) -> torch.Tensor:
    """Batch mean of the per-triplet total loss (matches the numpy reference)."""
    d = a.shape[1]
    d_ap = ((a - p) ** 2).sum(dim=1)
    d_an = ((a - n) ** 2).sum(dim=1)
    triplet = torch.clamp(cfg.margin + d_ap - d_an, min=0.0)
    norms = (a**2).sum(dim=1) + (p**2).sum(dim=1) + (n**2).sum(dim=1)
    embedd = norms / (3.0 * d)
    return (triplet + cfg.alpha * embedd).mean()


def _load_images(paths: Sequence[str], size: int,
                 cache: dict[str, np.ndarray]) -> np.ndarray:
    out = np.zeros((len(paths), 3, size, size), dtype=np.float32)
    for i, path in enumerate(paths):
        if path not in cache:
            img = imageio.load_image(path)
            cache[path] = imageio.to_float_chw(imageio.resize_image(img, (size, size)))
        out[i] = cache[path]
    return out


def train_embedding_model(triplets: Sequence[Triplet],
                          train_cfg: TrainConfig = TINY_TRAIN_CONFIG,
                          loss_cfg: TripletLossConfig = TripletLossConfig()) -> EmbeddingModel:
    """Adam on the total triplet loss over image triplets.

    With ``semi_hard_mining`` enabled, each batch re-picks negatives among
    the batch's catalog-side embeddings via semi-hard selection; triplets
    whose mining yields no admissible negative are skipped for that step.
    """
    triplets = list(triplets)
    if not triplets:
        raise ValueError("empty triplet training set")
    seed_torch(train_cfg.seed)
    rng = np.random.default_rng(train_cfg.seed)
    net = EmbeddingNet(train_cfg)
    opt = torch.optim.Adam(net.parameters(), lr=train_cfg.learning_rate)
    cache: dict[str, np.ndarray] = {}
    size = train_cfg.input_size

    n = len(triplets)
    loss_history: list[float] = []
    net.train()
    for _ in range(train_cfg.epochs):
        order = rng.permutation(n)
        epoch_losses: list[float] = []
        for start in range(0, n, train_cfg.batch_size):
            batch = [triplets[i] for i in order[start:start + train_cfg.batch_size]]
            xa = torch.from_numpy(_load_images([t.anchor_path for t in batch], size, cache))
            xp = torch.from_numpy(_load_images([t.positive_path for t in batch], size, cache))
            xn = torch.from_numpy(_load_images([t.negative_path for t in batch], size, cache))
            opt.zero_grad()
            ea, ep, en = net(xa), net(xp), net(xn)
            if train_cfg.semi_hard_mining:
                keep, mined = _mine_batch(ea, ep, en, batch, loss_cfg.margin)
                if not keep:
                    continue
                loss = _torch_total_loss(ea[keep], ep[keep], mined, loss_cfg)
            else:
                loss = _torch_total_loss(ea, ep, en, loss_cfg)
            loss.backward()
            opt.step()
            epoch_losses.append(float(loss.detach()))
        loss_history.append(float(np.mean(epoch_losses)) if epoch_losses else float("nan"))
    return EmbeddingModel(net, train_cfg, loss_history)


def _mine_batch(ea: torch.Tensor, ep: torch.Tensor, en: torch.Tensor,
                batch: Sequence[Triplet], margin: float):
    """Semi-hard re-selection of negatives among the batch's catalog images.

    The candidate pool per anchor is its own positive plus every other
    triplet's positive and negative (catalog side), labeled by garment.
    """
    pool = torch.cat([ep, en]).detach().numpy()
    pool_labels = [t.garment_id for t in batch] + [t.negative_garment_id for t in batch]
    keep: list[int] = []
    mined_rows: list[torch.Tensor] = []
    for i, _triplet in enumerate(batch):
        anchor = ea[i].detach().numpy()
        stack = np.concatenate([anchor[None], pool])
        labels = [batch[i].garment_id] + pool_labels
        idx = mine_semi_hard(0, stack, labels, margin)
        if idx is None:
            continue
        pool_idx = idx - 1
        keep.append(i)
        mined_rows.append(ep[pool_idx] if pool_idx < len(batch) else en[pool_idx - len(batch)])
    mined = torch.stack(mined_rows) if mined_rows else None
    return keep, mined


def save_embedding_model(model: EmbeddingModel, path: str | os.PathLike) -> None:
    torch.save(
        {
            "format": CHECKPOINT_FORMAT,
            "config": asdict(model.config),
            "loss_history": model.loss_history,
            "state": model.net.state_dict(),
        },
        path,
    )


def load_embedding_model(path: str | os.PathLike) -> EmbeddingModel:
    blob = torch.load(path, map_location="cpu", weights_only=True)
    if blob.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"not an embedding checkpoint: {path}")
    config = TrainConfig(**blob["config"])
    net = EmbeddingNet(config)
    net.load_state_dict(blob["state"])
    return EmbeddingModel(net, config, blob.get("loss_history"))


# ---------------------------------------------------------------------------
# Single config file carrying both the training and the loss hyperparameters;
# omitted fields fall back to the standard defaults (margin 0.2, alpha 5e-5,
# lr 5e-5, batch 32, d 2048, depth 50)


def save_train_config(path: str | os.PathLike, train_cfg: TrainConfig,
                      loss_cfg: TripletLossConfig) -> None:
    from dataclasses import asdict as _asdict

    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"train": _asdict(train_cfg), "loss": _asdict(loss_cfg)},
                  fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_train_config(path: str | os.PathLike) -> tuple[TrainConfig, TripletLossConfig]:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    return TrainConfig(**raw.get("train", {})), TripletLossConfig(**raw.get("loss", {}))


# ---------------------------------------------------------------------------
# Vector record IO: {d: uint32 LE} then d little-endian float32, plus sidecar


def write_vector_record(vec: np.ndarray, path: str | os.PathLike,
                        sidecar: dict | None = None) -> None:
    vec = np.asarray(vec, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<I", vec.shape[0]))
        fh.write(vec.tobytes())
    meta = {"d": int(vec.shape[0]), "dtype": "float32", "byte_order": "little"}
    if sidecar:
        meta.update(sidecar)
    with open(os.fspath(path) + ".json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_vector_record(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        (d,) = struct.unpack("<I", fh.read(4))
        data = fh.read(4 * d)
    if len(data) != 4 * d:
        raise ValueError(f"truncated vector record: {path}")
    return np.frombuffer(data, dtype="<f4").copy()
