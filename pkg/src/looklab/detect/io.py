"""Ground-truth and detections manifests (JSONL)."""

from __future__ import annotations

import os
from typing import Mapping, Sequence

from ..manifests import read_jsonl, write_jsonl
from .boxes import BoundingBox, Detection, GroundTruthBox


def _box_from(rec: dict) -> BoundingBox:
    return BoundingBox(rec["x_min"], rec["y_min"], rec["x_max"], rec["y_max"])


def _box_to(box: BoundingBox) -> dict:
    return {"x_min": box.x_min, "y_min": box.y_min, "x_max": box.x_max, "y_max": box.y_max}


def load_gt_manifest(path: str | os.PathLike) -> dict[str, list[GroundTruthBox]]:
    """{image_path, boxes: [{x_min, y_min, x_max, y_max, article_type}]} per line."""
    out: dict[str, list[GroundTruthBox]] = {}
    for rec in read_jsonl(path):
        out[rec["image_path"]] = [
            GroundTruthBox(box=_box_from(b), article_type=b["article_type"])
            for b in rec["boxes"]
        ]
    return out


def save_gt_manifest(gts: Mapping[str, Sequence[GroundTruthBox]], path: str | os.PathLike) -> None:
    write_jsonl(path, (
        {
            "image_path": image,
            "boxes": [{**_box_to(gt.box), "article_type": gt.article_type} for gt in boxes],
        }
        for image, boxes in gts.items()
    ))


def load_detections_file(path: str | os.PathLike) -> dict[str, list[Detection]]:
    """Same schema as the GT manifest plus a per-box score."""
    out: dict[str, list[Detection]] = {}
    for rec in read_jsonl(path):
        out[rec["image_path"]] = [
            Detection(box=_box_from(b), article_type=b["article_type"], score=b["score"])
            for b in rec["boxes"]
        ]
    return out


def save_detections_file(dets: Mapping[str, Sequence[Detection]], path: str | os.PathLike) -> None:
    write_jsonl(path, (
        {
            "image_path": image,
            "boxes": [
                {**_box_to(d.box), "article_type": d.article_type, "score": d.score}
                for d in boxes
            ],
        }
        for image, boxes in dets.items()
    ))
