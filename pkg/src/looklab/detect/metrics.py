"""Average precision (all-point interpolation) and corpus-level evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .boxes import Detection, GroundTruthBox
from .matching import match_detections


def average_precision(flags: Sequence[bool], scores: Sequence[float] | None,
                      num_gt: int) -> float:
    """Area under the precision-recall curve, all-point interpolation.

    ``flags`` are per-detection TP markers; when ``scores`` is given the
    pairs are sorted by descending score first (ties keep input order),
    otherwise flags are taken as already rank-ordered. Zero ground truth
    yields 0.
    """
    if num_gt < 0:
        raise ValueError("num_gt must be >= 0")
    if num_gt == 0 or len(flags) == 0:
        return 0.0
    if scores is not None:
        if len(scores) != len(flags):
            raise ValueError("flags and scores must align")
        order = sorted(range(len(flags)), key=lambda i: (-scores[i], i))
        flags = [flags[i] for i in order]
    tp = np.cumsum([1 if f else 0 for f in flags], dtype=np.float64)
    fp = np.cumsum([0 if f else 1 for f in flags], dtype=np.float64)
    recall = tp / num_gt
    precision = tp / (tp + fp)

    mrec = np.concatenate(([0.0], recall, [1.0]))
    mpre = np.concatenate(([0.0], precision, [0.0]))
    # precision envelope: best precision achievable at recall >= r
    for i in range(len(mpre) - 2, -1, -1):
        mpre[i] = max(mpre[i], mpre[i + 1])
    changed = np.where(mrec[1:] != mrec[:-1])[0] + 1
    return float(np.sum((mrec[changed] - mrec[changed - 1]) * mpre[changed]))


def mean_average_precision(aps: Mapping[str, float],
                           gt_counts: Mapping[str, int] | None = None) -> float:
    """Unweighted mean over classes with ground truth."""
    if gt_counts is None:
        evaluable = dict(aps)
    else:
        evaluable = {c: ap for c, ap in aps.items() if gt_counts.get(c, 0) > 0}
    if not evaluable:
        raise ValueError("no class with ground truth to average over")
    return float(np.mean(list(evaluable.values())))


@dataclass
class DetectionEvalResult:
    per_class_ap: dict[str, float]
    gt_counts: dict[str, int]
    map_score: float

    def to_csv(self) -> str:
        lines = ["article_type,num_gt,ap"]
        for cls in sorted(self.per_class_ap):
            lines.append(f"{cls},{self.gt_counts.get(cls, 0)},{self.per_class_ap[cls]:.6f}")
        lines.append(f"mAP,,{self.map_score:.6f}")
        return "\n".join(lines) + "\n"


def evaluate_detections(dets_by_image: Mapping[str, Sequence[Detection]],
                        gts_by_image: Mapping[str, Sequence[GroundTruthBox]],
                        iou_thresh: float = 0.5) -> DetectionEvalResult:
    """Per-class AP over a corpus plus the mean over classes with ground truth.

    Matching is per image; detection ranking for AP is global per class.
    """
    gt_counts: dict[str, int] = {}
    for gts in gts_by_image.values():
        for gt in gts:
            gt_counts[gt.article_type] = gt_counts.get(gt.article_type, 0) + 1

    per_class: dict[str, list[tuple[float, bool]]] = {}
    for image, dets in dets_by_image.items():
        gts = list(gts_by_image.get(image, ()))
        flags = match_detections(list(dets), gts, iou_thresh=iou_thresh)
        for det, flag in zip(dets, flags):
            per_class.setdefault(det.article_type, []).append((det.score, flag))

    classes = sorted(set(gt_counts) | set(per_class))
    aps = {}
    for cls in classes:
        pairs = per_class.get(cls, [])
        aps[cls] = average_precision(
            [f for _, f in pairs], [s for s, _ in pairs], gt_counts.get(cls, 0)
        )
    map_score = mean_average_precision(aps, gt_counts)
    return DetectionEvalResult(per_class_ap=aps, gt_counts=gt_counts, map_score=map_score)
