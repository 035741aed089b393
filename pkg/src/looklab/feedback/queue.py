"""Uncertainty-band candidate selection for tagger review."""

from __future__ import annotations

from typing import Mapping, Sequence

from ..detect.boxes import Detection
from .records import CandidateReason, ReviewCandidate


def enqueue_candidates(detections: Mapping[str, Sequence[Detection]],
                       score_band: tuple[float, float],
                       budget: int) -> list[ReviewCandidate]:
    """Detections with score in [lo, hi), ranked by distance to the band
    midpoint (most uncertain first), truncated to the budget.

    Candidate ids are assigned in rank order, so identical inputs yield
    identical queues.
    """
    lo, hi = score_band
    if not (0.0 <= lo < hi <= 1.0):
        raise ValueError(f"score band ({lo}, {hi}) must satisfy 0 <= lo < hi <= 1")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    mid = (lo + hi) / 2.0
    pool: list[tuple[float, int, str, Detection]] = []
    seq = 0
    for image_ref, dets in detections.items():
        for det in dets:
            if lo <= det.score < hi:
                pool.append((abs(det.score - mid), seq, image_ref, det))
            seq += 1
    pool.sort(key=lambda item: (item[0], item[1]))
    return [
        ReviewCandidate(
            candidate_id=f"cand-{rank:05d}",
            image_ref=image_ref,
            detection=det,
            reason=CandidateReason.LOW_SCORE,
        )
        for rank, (_, _, image_ref, det) in enumerate(pool[:budget])
    ]
