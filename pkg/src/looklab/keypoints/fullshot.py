"""The head-and-ankles presence heuristic over decoded keypoints."""

from __future__ import annotations

from .schema import KeypointSchema, KeypointSet

DEFAULT_CONF_THRESHOLD = 0.5


class SchemaMismatchError(ValueError):
    """Keypoint set does not carry the schema's keypoints."""


def is_full_shot(kps: KeypointSet, schema: KeypointSchema,
                 conf_threshold: float = DEFAULT_CONF_THRESHOLD) -> bool:
    """True iff at least one head keypoint and every ankle keypoint clear
    the confidence threshold.

    Requiring both ankles (not just one) rejects side-cropped images where a
    leg is cut off.
    """
    if not kps.conforms_to(schema):
        missing = set(schema.names) - set(kps.points)
        extra = set(kps.points) - set(schema.names)
        raise SchemaMismatchError(f"keypoint set mismatch: missing={sorted(missing)} extra={sorted(extra)}")
    head_ok = any(kps[name].confidence >= conf_threshold for name in schema.head_group)
    ankles_ok = all(kps[name].confidence >= conf_threshold for name in schema.ankle_group)
    return head_ok and ankles_ok
