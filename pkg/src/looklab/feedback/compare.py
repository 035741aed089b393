"""Before/after detector comparison: per-broad-category AP and deltas."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .. import imageio
from ..detect.boxes import Detection, GroundTruthBox
from ..detect.detectors import DetectorContract
from ..detect.metrics import evaluate_detections
from ..detect.taxonomy import ArticleTaxonomy, DEFAULT_TAXONOMY


@dataclass
class ApComparison:
    rows: list[tuple[str, float, float, float]]  # broad, before, after, delta

    def delta(self, broad: str) -> float:
        for name, _, _, d in self.rows:
            if name == broad:
                return d
        raise KeyError(broad)

    def to_csv(self) -> str:
        lines = ["broad_category,ap_before,ap_after,delta"]
        for broad, before, after, delta in self.rows:
            lines.append(f"{broad},{before:.6f},{after:.6f},{delta:.6f}")
        return "\n".join(lines) + "\n"


def _detect_corpus(detector: DetectorContract,
                   gts: Mapping[str, Sequence[GroundTruthBox]]) -> dict[str, list[Detection]]:
    out = {}
    for image_ref in gts:
        try:
            image = imageio.load_image(image_ref)
        except imageio.ImageDecodeError:
            # replay detectors never look at pixels
            image = np.zeros((1, 1, 3), dtype=np.uint8)
        out[image_ref] = detector.detect(image, image_ref=image_ref)
    return out


def _to_broad(boxes, taxonomy: ArticleTaxonomy):
    mapped = {}
    for image_ref, items in boxes.items():
        row = []
        for item in items:
            broad = taxonomy.broad_of(item.article_type)
            if isinstance(item, Detection):
                row.append(Detection(box=item.box, article_type=broad, score=item.score))
            else:
                row.append(GroundTruthBox(box=item.box, article_type=broad))
        mapped[image_ref] = row
    return mapped


def compare_ap(model_before: DetectorContract, model_after: DetectorContract,
               eval_gt: Mapping[str, Sequence[GroundTruthBox]],
               taxonomy: ArticleTaxonomy = DEFAULT_TAXONOMY,
               iou_thresh: float = 0.5) -> ApComparison:
    """Evaluate both detectors on the same ground truth at the same IoU;
    classes are the broad categories, matching the report shape."""
    gt_broad = _to_broad(eval_gt, taxonomy)
    rows = []
    results = []
    for model in (model_before, model_after):
        dets = _to_broad(_detect_corpus(model, eval_gt), taxonomy)
        results.append(evaluate_detections(dets, gt_broad, iou_thresh=iou_thresh))
    before, after = results
    for broad in sorted(set(before.per_class_ap) | set(after.per_class_ap)):
        b = before.per_class_ap.get(broad, 0.0)
        a = after.per_class_ap.get(broad, 0.0)
        rows.append((broad, b, a, a - b))
    return ApComparison(rows=rows)
