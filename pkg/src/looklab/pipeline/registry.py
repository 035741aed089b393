"""Model registry: every trained component plus the catalog index, with
directory save/load so services and the batch CLI share one artifact."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..detect.detectors import (
    DetectorContract,
    GridDetector,
    ReplayDetector,
    load_grid_detector,
    save_grid_detector,
)
from ..detect.io import load_detections_file, save_detections_file
from ..detect.taxonomy import ArticleTaxonomy, DEFAULT_TAXONOMY, load_taxonomy, save_taxonomy
from ..embed.model import EmbeddingModel, load_embedding_model, save_embedding_model
from ..keypoints.fullshot import DEFAULT_CONF_THRESHOLD
from ..keypoints.model import KeypointModel, load_keypoint_model, save_keypoint_model
from ..pose.classifier import PoseModel, load_pose_model, save_pose_model
from ..retrieve.store import CatalogIndex, index_catalog, load_catalog_file, save_catalog_file

REGISTRY_FORMAT = "looklab.registry/1"


@dataclass
class ModelRegistry:
    """Immutable bundle for inference; hot-swap happens by loading a fresh
    registry and switching the reference between requests."""

    keypoint_model: KeypointModel
    pose_model: PoseModel
    detector: DetectorContract
    embed_models: dict[str, EmbeddingModel]  # keyed by broad category
    index: CatalogIndex
    taxonomy: ArticleTaxonomy = field(default_factory=lambda: DEFAULT_TAXONOMY)
    kp_conf_threshold: float = DEFAULT_CONF_THRESHOLD
    version: str = "1"

    def model_info(self) -> dict:
        return {
            "version": self.version,
            "broad_categories": sorted(self.embed_models),
            "article_types": self.index.article_types,
            "catalog_size": len(self.index),
            "detector": {"name": self.detector.name, "version": self.detector.version},
            "kp_conf_threshold": self.kp_conf_threshold,
        }


def save_registry(registry: ModelRegistry, root: str | os.PathLike,
                  catalog_entries=None) -> None:
    """Write every component under ``root``. ``catalog_entries`` must be the
    entries the index was built from (the index itself is not serialized)."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    save_keypoint_model(registry.keypoint_model, root / "keypoints.pt")
    save_pose_model(registry.pose_model, root / "pose.pt")
    if isinstance(registry.detector, GridDetector):
        detector_kind = "grid"
        save_grid_detector(registry.detector, root / "detector.pt")
    elif isinstance(registry.detector, ReplayDetector):
        detector_kind = "replay"
        save_detections_file(registry.detector.detections, root / "detections.jsonl")
    else:
        raise ValueError(f"cannot serialize detector {registry.detector.name!r}")
    for broad, model in registry.embed_models.items():
        save_embedding_model(model, root / f"embed_{broad}.pt")
    if catalog_entries is None:
        raise ValueError("save_registry needs the catalog entries to persist the index")
    save_catalog_file(catalog_entries, root / "catalog.bin",
                      model_version=registry.version)
    save_taxonomy(registry.taxonomy, root / "taxonomy.json")
    meta = {
        "format": REGISTRY_FORMAT,
        "version": registry.version,
        "kp_conf_threshold": registry.kp_conf_threshold,
        "detector_kind": detector_kind,
        "broad_categories": sorted(registry.embed_models),
    }
    with open(root / "registry.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_registry(root: str | os.PathLike) -> ModelRegistry:
    root = Path(root)
    with open(root / "registry.json", "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    if meta.get("format") != REGISTRY_FORMAT:
        raise ValueError(f"not a registry directory: {root}")
    taxonomy = load_taxonomy(root / "taxonomy.json")
    if meta["detector_kind"] == "grid":
        detector: DetectorContract = load_grid_detector(root / "detector.pt")
    else:
        detector = ReplayDetector(load_detections_file(root / "detections.jsonl"))
    embed_models = {
        broad: load_embedding_model(root / f"embed_{broad}.pt")
        for broad in meta["broad_categories"]
    }
    entries, _header = load_catalog_file(root / "catalog.bin", taxonomy=taxonomy)
    return ModelRegistry(
        keypoint_model=load_keypoint_model(root / "keypoints.pt"),
        pose_model=load_pose_model(root / "pose.pt"),
        detector=detector,
        embed_models=embed_models,
        index=index_catalog(entries),
        taxonomy=taxonomy,
        kp_conf_threshold=meta["kp_conf_threshold"],
        version=meta["version"],
    )
