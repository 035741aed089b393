"""Keypoint naming schema and decoded keypoint sets."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class KeypointSchema:
    """Ordered keypoint names plus the head/ankle subsets the full-shot
    heuristic looks at.

    Names must be unique; head_group and ankle_group must be non-empty,
    disjoint subsets of names.
    """

    names: tuple[str, ...]
    head_group: frozenset[str]
    ankle_group: frozenset[str]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("keypoint names must be unique")
        names = set(self.names)
        if not self.head_group or not self.ankle_group:
            raise ValueError("head_group and ankle_group must be non-empty")
        if not self.head_group <= names or not self.ankle_group <= names:
            raise ValueError("head/ankle groups must be subsets of names")
        if self.head_group & self.ankle_group:
            raise ValueError("head_group and ankle_group must be disjoint")

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)


# 17-point COCO layout; the heuristic's head group is the five face points.
COCO_17 = KeypointSchema(
    names=(
        "nose",
        "left_eye", "right_eye",
        "left_ear", "right_ear",
        "left_shoulder", "right_shoulder",
        "left_elbow", "right_elbow",
        "left_wrist", "right_wrist",
        "left_hip", "right_hip",
        "left_knee", "right_knee",
        "left_ankle", "right_ankle",
    ),
    head_group=frozenset({"nose", "left_eye", "right_eye", "left_ear", "right_ear"}),
    ankle_group=frozenset({"left_ankle", "right_ankle"}),
)


@dataclass(frozen=True)
class Keypoint:
    x: float
    y: float
    confidence: float

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass
class KeypointSet:
    """Named 2-D keypoints with confidences, in input-image pixel coordinates."""

    points: dict[str, Keypoint] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Keypoint:
        return self.points[name]

    def __contains__(self, name: str) -> bool:
        return name in self.points

    def conforms_to(self, schema: KeypointSchema) -> bool:
        return set(self.points) == set(schema.names)
