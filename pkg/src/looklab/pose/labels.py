"""The five pose classes, in canonical (tie-break) order."""

from __future__ import annotations

from enum import Enum


class PoseLabel(str, Enum):
    FRONT = "front"
    BACK = "back"
    LEFT = "left"
    RIGHT = "right"
    DETAILED = "detailed"


# canonical order: front < back < left < right < detailed
POSE_ORDER: tuple[PoseLabel, ...] = (
    PoseLabel.FRONT,
    PoseLabel.BACK,
    PoseLabel.LEFT,
    PoseLabel.RIGHT,
    PoseLabel.DETAILED,
)

POSE_INDEX = {label: i for i, label in enumerate(POSE_ORDER)}


def parse_pose_label(value: str) -> PoseLabel:
    try:
        return PoseLabel(value)
    except ValueError:
        raise ValueError(
            f"unknown pose label {value!r}; expected one of {[l.value for l in POSE_ORDER]}"
        ) from None
