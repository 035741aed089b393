"""Review candidates and tagger verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from ..detect.boxes import BoundingBox, Detection


class CandidateReason(str, Enum):
    LOW_SCORE = "low_score"
    CLASS_DISAGREEMENT = "class_disagreement"
    USER_FLAG = "user_flag"


class CandidateStatus(str, Enum):
    PENDING = "pending"
    REVIEWED = "reviewed"


class Verdict(str, Enum):
    CORRECT = "correct"
    WRONG_CLASS = "wrong_class"
    WRONG_BOX = "wrong_box"
    MISSED_OBJECT = "missed_object"


class FeedbackValidationError(ValueError):
    """Verdict payload violates the record invariants."""


@dataclass
class ReviewCandidate:
    candidate_id: str
    image_ref: str
    detection: Detection
    reason: CandidateReason
    status: CandidateStatus = CandidateStatus.PENDING

    def to_dict(self) -> dict:
        return {
            "candidate_id": self.candidate_id,
            "image_ref": self.image_ref,
            "detection": {
                "x_min": self.detection.box.x_min,
                "y_min": self.detection.box.y_min,
                "x_max": self.detection.box.x_max,
                "y_max": self.detection.box.y_max,
                "article_type": self.detection.article_type,
                "score": self.detection.score,
            },
            "reason": self.reason.value,
            "status": self.status.value,
        }


def _utcnow_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class FeedbackRecord:
    candidate_id: str
    verdict: Verdict
    tagger_id: str
    corrected_label: str | None = None
    corrected_box: BoundingBox | None = None
    timestamp: str = field(default_factory=_utcnow_iso)

    def __post_init__(self):
        if self.verdict is Verdict.WRONG_CLASS and not self.corrected_label:
            raise FeedbackValidationError("wrong_class verdict requires corrected_label")
        if self.verdict is Verdict.WRONG_BOX and self.corrected_box is None:
            raise FeedbackValidationError("wrong_box verdict requires corrected_box")
        if self.verdict is Verdict.MISSED_OBJECT and (
            self.corrected_box is None or not self.corrected_label
        ):
            raise FeedbackValidationError(
                "missed_object verdict requires corrected_box and corrected_label"
            )

    def to_dict(self) -> dict:
        d: dict = {
            "candidate_id": self.candidate_id,
            "verdict": self.verdict.value,
            "tagger_id": self.tagger_id,
            "timestamp": self.timestamp,
        }
        if self.corrected_label is not None:
            d["corrected_label"] = self.corrected_label
        if self.corrected_box is not None:
            d["corrected_box"] = {
                "x_min": self.corrected_box.x_min,
                "y_min": self.corrected_box.y_min,
                "x_max": self.corrected_box.x_max,
                "y_max": self.corrected_box.y_max,
            }
        return d

    @classmethod
    def from_dict(cls, raw: dict) -> "FeedbackRecord":
        box = raw.get("corrected_box")
        return cls(
            candidate_id=raw["candidate_id"],
            verdict=Verdict(raw["verdict"]),
            tagger_id=raw["tagger_id"],
            corrected_label=raw.get("corrected_label"),
            corrected_box=BoundingBox(**box) if box else None,
            timestamp=raw["timestamp"],
        )


def candidate_from_dict(raw: dict) -> ReviewCandidate:
    det = raw["detection"]
    return ReviewCandidate(
        candidate_id=raw["candidate_id"],
        image_ref=raw["image_ref"],
        detection=Detection(
            box=BoundingBox(det["x_min"], det["y_min"], det["x_max"], det["y_max"]),
            article_type=det["article_type"],
            score=det["score"],
        ),
        reason=CandidateReason(raw["reason"]),
        status=CandidateStatus(raw.get("status", "pending")),
    )


def save_candidates_file(candidates, path) -> None:
    from ..manifests import write_jsonl

    write_jsonl(path, (c.to_dict() for c in candidates))


def load_candidates_file(path) -> list[ReviewCandidate]:
    from ..manifests import read_jsonl

    return [candidate_from_dict(rec) for rec in read_jsonl(path)]
