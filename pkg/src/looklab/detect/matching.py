"""Greedy detection-to-ground-truth matching at an IoU threshold."""

from __future__ import annotations

from typing import Sequence

from .boxes import Detection, GroundTruthBox, iou


def match_detections(dets: Sequence[Detection], gts: Sequence[GroundTruthBox],
                     iou_thresh: float = 0.5) -> list[bool]:
    """Per-detection TP/FP flags, aligned with the input order.

    Detections are processed in descending score order (ties keep input
    order). A detection is a TP iff some not-yet-matched ground truth of the
    same class overlaps it with IoU >= iou_thresh; each ground truth matches
    at most once, to the candidate detection with the highest IoU.
    """
    if not (0.0 < iou_thresh <= 1.0):
        raise ValueError(f"iou threshold {iou_thresh} outside (0, 1]")
    order = sorted(range(len(dets)), key=lambda i: (-dets[i].score, i))
    matched_gt: set[int] = set()
    flags = [False] * len(dets)
    for i in order:
        det = dets[i]
        best_j = -1
        best_iou = 0.0
        for j, gt in enumerate(gts):
            if j in matched_gt or gt.article_type != det.article_type:
                continue
            overlap = iou(det.box, gt.box)
            if overlap >= iou_thresh and overlap > best_iou:
                best_iou = overlap
                best_j = j
        if best_j >= 0:
            matched_gt.add(best_j)
            flags[i] = True
    return flags
