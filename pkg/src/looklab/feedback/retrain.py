"""Build the corrected annotation manifest from tagger verdicts."""

from __future__ import annotations

from typing import Mapping, Sequence

from ..detect.boxes import BoundingBox, GroundTruthBox, iou
from .records import FeedbackRecord, ReviewCandidate, Verdict

_MATCH_IOU = 0.5


class RetrainAssemblyError(ValueError):
    pass


def _find_target(boxes: list[GroundTruthBox], box: BoundingBox) -> int | None:
    """Index of the annotation a correction refers to: exact coordinates
    first, then the best overlap at IoU >= 0.5."""
    for i, gt in enumerate(boxes):
        if gt.box == box:
            return i
    best, best_iou = None, _MATCH_IOU
    for i, gt in enumerate(boxes):
        overlap = iou(gt.box, box)
        if overlap >= best_iou:
            best, best_iou = i, overlap
    return best


def assemble_retrain_set(base: Mapping[str, Sequence[GroundTruthBox]],
                         records: Sequence[FeedbackRecord],
                         candidates: Mapping[str, ReviewCandidate]
                         ) -> dict[str, list[GroundTruthBox]]:
    """Corrections override base annotations; missed objects add boxes.

    Deterministic given record order, and idempotent: re-applying a
    correction that already took effect is a no-op.
    """
    out: dict[str, list[GroundTruthBox]] = {img: list(boxes) for img, boxes in base.items()}
    for record in records:
        cand = candidates.get(record.candidate_id)
        if cand is None:
            raise RetrainAssemblyError(f"record references unknown candidate {record.candidate_id}")
        if cand.image_ref not in out:
            raise RetrainAssemblyError(f"correction references unknown image {cand.image_ref!r}")
        boxes = out[cand.image_ref]
        det_box = cand.detection.box

        if record.verdict is Verdict.CORRECT:
            continue
        if record.verdict is Verdict.MISSED_OBJECT:
            added = GroundTruthBox(box=record.corrected_box,
                                   article_type=record.corrected_label)
            if added not in boxes:
                boxes.append(added)
            continue
        if record.verdict is Verdict.WRONG_CLASS:
            idx = _find_target(boxes, det_box)
            if idx is None:
                raise RetrainAssemblyError(
                    f"wrong_class correction matches no annotation in {cand.image_ref!r}")
            boxes[idx] = GroundTruthBox(box=boxes[idx].box,
                                        article_type=record.corrected_label)
            continue
        if record.verdict is Verdict.WRONG_BOX:
            # already applied? the corrected box is present -> no-op
            if any(gt.box == record.corrected_box for gt in boxes):
                continue
            idx = _find_target(boxes, det_box)
            if idx is None:
                raise RetrainAssemblyError(
                    f"wrong_box correction matches no annotation in {cand.image_ref!r}")
            label = record.corrected_label or boxes[idx].article_type
            boxes[idx] = GroundTruthBox(box=record.corrected_box, article_type=label)
    return out
