"""End-to-end orchestration: PDP images -> full-shot selection -> front-pose
filter -> detection -> crop -> embed -> retrieve, with per-article failure
isolation and optional per-stage wall-clock profiling.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .. import imageio
from ..detect.boxes import Detection, crop_rois
from ..keypoints.fullshot import is_full_shot
from ..manifests import dumps_canonical
from ..pose.classifier import classify_pose
from ..pose.labels import PoseLabel
from ..retrieve.scoring import RetrievalResult, ScoringMode, top_k
from .registry import ModelRegistry

DEFAULT_K = 14


class RequestError(Exception):
    """The request as a whole cannot be served (no decodable image)."""


class Stage(str, Enum):
    KEYPOINTS = "keypoints"
    POSE = "pose"
    DETECT = "detect"
    EMBED = "embed"
    RETRIEVE = "retrieve"


@dataclass
class StageTiming:
    stage: Stage
    elapsed_ms: float

    def __post_init__(self):
        if self.elapsed_ms < 0:
            raise ValueError("elapsed time must be >= 0")


@dataclass
class PdpRequest:
    request_id: str
    images: list[str]
    ugc: bool = False

    def __post_init__(self):
        if not self.images:
            raise ValueError("request needs at least one image")


@dataclass
class ArticleRecommendation:
    detection: Detection
    result: RetrievalResult
    reason: str | None = None


@dataclass
class LookRecommendation:
    request_id: str
    selected_image: str | None
    rejection_reasons: dict[str, str] = field(default_factory=dict)
    per_article: list[ArticleRecommendation] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "request_id": self.request_id,
            "selected_image": self.selected_image,
            "rejection_reasons": dict(sorted(self.rejection_reasons.items())),
            "per_article": [
                {
                    "article_type": a.detection.article_type,
                    "detection": {
                        "box": {
                            "x_min": float(a.detection.box.x_min),
                            "y_min": float(a.detection.box.y_min),
                            "x_max": float(a.detection.box.x_max),
                            "y_max": float(a.detection.box.y_max),
                        },
                        "article_type": a.detection.article_type,
                        "score": float(a.detection.score),
                    },
                    "result": {
                        "query_ref": a.result.query_ref,
                        "ranked": [
                            {"product_id": pid, "score": float(score)}
                            for pid, score in a.result.ranked
                        ],
                    },
                    "reason": a.reason,
                }
                for a in self.per_article
            ],
        }

    def to_json(self) -> str:
        return dumps_canonical(self.to_dict())


class _Timer:
    def __init__(self, sink: list[StageTiming] | None):
        self.sink = sink
        self.acc: dict[Stage, float] = {}

    def add(self, stage: Stage, elapsed_s: float) -> None:
        if self.sink is not None:
            self.acc[stage] = self.acc.get(stage, 0.0) + elapsed_s * 1000.0

    def flush(self) -> None:
        if self.sink is not None:
            for stage in Stage:
                if stage in self.acc:
                    self.sink.append(StageTiming(stage=stage, elapsed_ms=self.acc[stage]))


def select_full_shot(images: list[tuple[str, np.ndarray]], registry: ModelRegistry,
                     timer: _Timer | None = None) -> tuple[str | None, dict[str, str]]:
    """Two-pass selection: keep images passing the head-and-ankles check,
    then keep front poses; pick the highest front confidence.

    Returns (chosen ref or None, per-image rejection reasons).
    """
    timer = timer or _Timer(None)
    reasons: dict[str, str] = {}

    t0 = time.perf_counter()
    full_shots: list[tuple[str, np.ndarray]] = []
    for ref, image in images:
        kps = registry.keypoint_model.infer(image)
        if is_full_shot(kps, registry.keypoint_model.schema, registry.kp_conf_threshold):
            full_shots.append((ref, image))
        else:
            reasons[ref] = "no_full_shot"
    timer.add(Stage.KEYPOINTS, time.perf_counter() - t0)

    t0 = time.perf_counter()
    candidates: list[tuple[float, str]] = []
    for ref, image in full_shots:
        label, conf = classify_pose(image, registry.pose_model)
        if label is PoseLabel.FRONT:
            candidates.append((conf, ref))
        else:
            reasons[ref] = "not_front"
    timer.add(Stage.POSE, time.perf_counter() - t0)

    if not candidates:
        return None, reasons
    best_conf, best_ref = max(candidates, key=lambda c: (c[0], c[1]))
    for conf, ref in candidates:
        if ref != best_ref:
            reasons[ref] = "lower_confidence"
    reasons[best_ref] = "selected"
    return best_ref, reasons


def _order_detections(dets: list[Detection]) -> list[Detection]:
    """Detection score descending, then box coordinates (merge determinism)."""
    return sorted(dets, key=lambda d: (-d.score, d.box.as_tuple(), d.article_type))


def recommend_look(req: PdpRequest, registry: ModelRegistry, k: int = DEFAULT_K,
                   _timer: _Timer | None = None) -> LookRecommendation:
    """Run the full chain; per-article failures never abort the request.

    UGC requests skip full-shot selection and detect directly on the input.
    """
    timer = _timer or _Timer(None)
    rec = LookRecommendation(request_id=req.request_id, selected_image=None)

    decoded: list[tuple[str, np.ndarray]] = []
    for ref in req.images:
        try:
            decoded.append((ref, imageio.load_image(ref)))
        except imageio.ImageDecodeError:
            rec.rejection_reasons[ref] = "decode_error"
    if not decoded:
        raise RequestError(f"request {req.request_id}: no decodable image")

    if req.ugc:
        selected_ref, selected_img = decoded[0]
        rec.selected_image = selected_ref
    else:
        selected_ref, reasons = select_full_shot(decoded, registry, timer)
        rec.rejection_reasons.update(reasons)
        if selected_ref is None:
            timer.flush()
            return rec
        rec.selected_image = selected_ref
        selected_img = next(img for ref, img in decoded if ref == selected_ref)

    t0 = time.perf_counter()
    detections = _order_detections(
        registry.detector.detect(selected_img, image_ref=selected_ref))
    timer.add(Stage.DETECT, time.perf_counter() - t0)

    for i, det in enumerate(detections):
        query_ref = f"{req.request_id}/{i}:{det.article_type}"
        empty = RetrievalResult(query_ref=query_ref, ranked=[])
        try:
            t0 = time.perf_counter()
            crops = crop_rois(selected_img, [det])
            if not crops:
                rec.per_article.append(ArticleRecommendation(det, empty, "degenerate_roi"))
                continue
            try:
                broad = registry.taxonomy.broad_of(det.article_type)
            except KeyError:
                rec.per_article.append(ArticleRecommendation(det, empty, "unknown_article_type"))
                continue
            model = registry.embed_models.get(broad)
            if model is None:
                rec.per_article.append(ArticleRecommendation(det, empty, "no_embedding_model"))
                continue
            vec = model.embed(crops[0][1])
            timer.add(Stage.EMBED, time.perf_counter() - t0)

            t0 = time.perf_counter()
            result = top_k(registry.index, vec, det.article_type, k=k,
                           mode=ScoringMode.COSINE, query_ref=query_ref)
            timer.add(Stage.RETRIEVE, time.perf_counter() - t0)
            reason = None if result.ranked else "empty_index"
            rec.per_article.append(ArticleRecommendation(det, result, reason))
        except Exception as exc:  # per-article isolation
            rec.per_article.append(ArticleRecommendation(det, empty, f"stage_error:{exc}"))
    timer.flush()
    return rec


def profile_request(req: PdpRequest, registry: ModelRegistry,
                    k: int = DEFAULT_K) -> tuple[LookRecommendation, list[StageTiming]]:
    """Identical recommendation plus wall-clock time per executed stage."""
    timings: list[StageTiming] = []
    rec = recommend_look(req, registry, k=k, _timer=_Timer(timings))
    return rec, timings
