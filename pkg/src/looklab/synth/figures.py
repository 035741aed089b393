"""Stick-figure geometry and rendering for the synthetic fixture world.

Figures wear up to three garments (top, bottom, shoes), carry color-coded
joint markers (one hue per keypoint) and a chest badge whose color encodes
the pose class. Keypoint ground truth comes with per-joint visibility, so
crops that cut off head or ankles produce honest negative full-shot labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..detect.boxes import BoundingBox, GroundTruthBox
from ..keypoints.schema import COCO_17
from ..pose.labels import PoseLabel
from .draw import draw_line, fill_disk, fill_rect, hsv_color, paste_patch

SKIN = (205, 175, 145)
JOINT_COLORS = [hsv_color(i / 17, 1.0, 1.0) for i in range(17)]

BADGE_COLORS: dict[PoseLabel, tuple[int, int, int]] = {
    PoseLabel.FRONT: (0, 200, 30),
    PoseLabel.BACK: (225, 20, 20),
    PoseLabel.LEFT: (20, 70, 245),
    PoseLabel.RIGHT: (250, 215, 0),
    PoseLabel.DETAILED: (210, 0, 210),
}

# (x offset, y) in figure units: x scaled by figure height and the pose's
# width factor, y measured from the figure top as a fraction of height
_JOINT_LAYOUT: dict[str, tuple[float, float]] = {
    "nose": (0.0, 0.040),
    "left_eye": (0.020, 0.030),
    "right_eye": (-0.020, 0.030),
    "left_ear": (0.040, 0.045),
    "right_ear": (-0.040, 0.045),
    "left_shoulder": (0.100, 0.180),
    "right_shoulder": (-0.100, 0.180),
    "left_elbow": (0.130, 0.320),
    "right_elbow": (-0.130, 0.320),
    "left_wrist": (0.150, 0.440),
    "right_wrist": (-0.150, 0.440),
    "left_hip": (0.060, 0.480),
    "right_hip": (-0.060, 0.480),
    "left_knee": (0.068, 0.680),
    "right_knee": (-0.068, 0.680),
    "left_ankle": (0.072, 0.900),
    "right_ankle": (-0.072, 0.900),
}

_WIDTH_FACTOR = {
    PoseLabel.FRONT: 1.0,
    PoseLabel.BACK: 1.0,
    PoseLabel.LEFT: 0.55,
    PoseLabel.RIGHT: 0.55,
    PoseLabel.DETAILED: 1.0,
}

# horizontal head shift (fraction of height) for profile views
_HEAD_SHIFT = {
    PoseLabel.FRONT: 0.0,
    PoseLabel.BACK: 0.0,
    PoseLabel.LEFT: 0.07,
    PoseLabel.RIGHT: -0.07,
    PoseLabel.DETAILED: 0.0,
}

_FACE_JOINTS = ("nose", "left_eye", "right_eye", "left_ear", "right_ear")

# face markers hidden per pose: the back view shows only ears, profiles show
# only the camera-side half of the face
_HIDDEN_FACE = {
    PoseLabel.FRONT: frozenset(),
    PoseLabel.BACK: frozenset({"nose", "left_eye", "right_eye"}),
    PoseLabel.LEFT: frozenset({"right_eye", "right_ear"}),
    PoseLabel.RIGHT: frozenset({"left_eye", "left_ear"}),
    PoseLabel.DETAILED: frozenset(),
}

_BONES = [
    ("left_shoulder", "right_shoulder"),
    ("left_hip", "right_hip"),
    ("left_shoulder", "left_elbow"), ("left_elbow", "left_wrist"),
    ("right_shoulder", "right_elbow"), ("right_elbow", "right_wrist"),
    ("left_hip", "left_knee"), ("left_knee", "left_ankle"),
    ("right_hip", "right_knee"), ("right_knee", "right_ankle"),
]


@dataclass(frozen=True)
class GarmentSpec:
    """A garment identity: two-tone colorblock plus a stripe pattern."""

    garment_id: str
    article_type: str
    base_color: tuple[int, int, int]
    block_color: tuple[int, int, int]
    stripe_color: tuple[int, int, int]
    stripe_period: int
    stripe_phase: int

    def patch(self, width: int, height: int) -> np.ndarray:
        """Render the garment texture at the given pixel size: upper block in
        base_color, lower block in block_color, striped in stripe_color."""
        patch = np.zeros((height, width, 3), dtype=np.uint8)
        split = max(1, int(round(height * 0.55)))
        patch[:split, :] = self.base_color
        patch[split:, :] = self.block_color
        for y in range(height):
            if (y + self.stripe_phase) % self.stripe_period == 0:
                patch[y, :] = self.stripe_color
        return patch


@dataclass
class FigureSpec:
    """Where and how a figure is drawn on the canvas."""

    pose: PoseLabel = PoseLabel.FRONT
    center: tuple[float, float] = (0.5, 0.5)  # canvas fractions
    height_frac: float = 0.85
    lean: float = 0.0  # horizontal shear, px per unit height
    garments: dict[str, GarmentSpec] = field(default_factory=dict)
    draw_badge: bool = True
    draw_joint_markers: bool = True


@dataclass
class FigureRender:
    image: np.ndarray
    keypoints: np.ndarray  # (17, 3): x, y, visible
    gt_boxes: list[GroundTruthBox]
    pose: PoseLabel


# garment regions in figure units: (x_lo, y_lo, x_hi, y_hi); the "slot" keys
# name where each article type is worn
_GARMENT_SLOTS = {
    "top": (-0.135, 0.170, 0.135, 0.475),
    "bottom": (-0.095, 0.480, 0.095, 0.660),
    "shoes": (-0.115, 0.855, 0.115, 0.955),
}

SLOT_OF_TYPE = {
    "T-shirts": "top", "Shirts": "top", "Women tops": "top",
    "Sweaters": "top", "SweatShirts": "top", "Jackets": "top",
    "Shorts": "bottom", "Jeans": "bottom", "Trousers": "bottom",
    "Track pants": "bottom", "Palazzos": "bottom", "Capris": "bottom",
    "Skirts": "bottom", "Women dress": "top",
    "Casual shoes": "shoes", "Sports shoes": "shoes",
    "Hand bags": "top",
}


def joint_positions(spec: FigureSpec, size: int) -> np.ndarray:
    """(17, 2) joint pixel coordinates for the canvas."""
    h = spec.height_frac * size
    cx = spec.center[0] * size
    cy = spec.center[1] * size
    top = cy - h / 2
    width = _WIDTH_FACTOR[spec.pose]
    pts = np.zeros((17, 2))
    head_shift = _HEAD_SHIFT[spec.pose] * h
    for i, name in enumerate(COCO_17.names):
        dx, fy = _JOINT_LAYOUT[name]
        x = cx + dx * h * width + spec.lean * (fy - 0.5) * h
        if name in _FACE_JOINTS:
            x += head_shift
        y = top + fy * h
        pts[i] = (x, y)
    return pts


def badge_rect(spec: FigureSpec, size: int) -> tuple[float, float, float, float]:
    """The chest badge rectangle in canvas pixels (the pose-color cue)."""
    bx0, by0, bx1, by1 = _slot_rect(spec, "top", size)
    bw = (bx1 - bx0) * 0.58
    bh = (by1 - by0) * 0.40
    bcx = (bx0 + bx1) / 2
    bcy = by0 + (by1 - by0) * 0.32
    return (bcx - bw / 2, bcy - bh / 2, bcx + bw / 2, bcy + bh / 2)


def _slot_rect(spec: FigureSpec, slot: str, size: int) -> tuple[float, float, float, float]:
    h = spec.height_frac * size
    cx = spec.center[0] * size
    top = spec.center[1] * size - h / 2
    width = _WIDTH_FACTOR[spec.pose]
    x_lo, y_lo, x_hi, y_hi = _GARMENT_SLOTS[slot]
    lean_mid = spec.lean * ((y_lo + y_hi) / 2 - 0.5) * h
    return (
        cx + x_lo * h * width + lean_mid,
        top + y_lo * h,
        cx + x_hi * h * width + lean_mid,
        top + y_hi * h,
    )


def render_figure(spec: FigureSpec, size: int = 64,
                  rng: np.random.Generator | None = None,
                  bg: int | None = None,
                  noise_sigma: float = 2.5) -> FigureRender:
    """Draw the figure; ground-truth boxes are the garment slots clamped to
    the canvas, keypoint visibility reflects the canvas bounds."""
    rng = rng or np.random.default_rng(0)
    base = int(rng.integers(198, 232)) if bg is None else bg
    img = np.full((size, size, 3), base, dtype=np.uint8)

    pts = joint_positions(spec, size)
    h = spec.height_frac * size
    name_idx = {name: i for i, name in enumerate(COCO_17.names)}

    # skeleton under everything
    thickness = max(2.0, 0.035 * h)
    for a, b in _BONES:
        pa, pb = pts[name_idx[a]], pts[name_idx[b]]
        draw_line(img, pa[0], pa[1], pb[0], pb[1], thickness, SKIN)
    neck = (pts[name_idx["left_shoulder"]] + pts[name_idx["right_shoulder"]]) / 2
    pelvis = (pts[name_idx["left_hip"]] + pts[name_idx["right_hip"]]) / 2
    draw_line(img, neck[0], neck[1], pelvis[0], pelvis[1], thickness * 1.6, SKIN)
    head_c = (pts[name_idx["nose"]][0], pts[name_idx["nose"]][1] + 0.015 * h)
    fill_disk(img, head_c[0], head_c[1], 0.055 * h, SKIN)

    # garments over the skeleton
    gt_boxes: list[GroundTruthBox] = []
    for article_type, garment in spec.garments.items():
        slot = SLOT_OF_TYPE[article_type]
        x0, y0, x1, y1 = _slot_rect(spec, slot, size)
        pw, ph = int(round(x1 - x0)), int(round(y1 - y0))
        if pw > 0 and ph > 0:
            if slot == "shoes":
                # two shoe patches with a gap; the box still spans both
                half = garment.patch(max(1, int(pw * 0.42)), ph)
                paste_patch(img, x0, y0, half)
                paste_patch(img, x1 - half.shape[1], y0, half)
            else:
                paste_patch(img, x0, y0, garment.patch(pw, ph))
        cx0, cy0 = max(0.0, x0), max(0.0, y0)
        cx1, cy1 = min(float(size), x1), min(float(size), y1)
        if cx1 - cx0 >= 2 and cy1 - cy0 >= 2:
            gt_boxes.append(GroundTruthBox(
                box=BoundingBox(cx0, cy0, cx1, cy1), article_type=article_type))

    if spec.draw_badge:
        bx0, by0, bx1, by1 = badge_rect(spec, size)
        fill_rect(img, bx0, by0, bx1, by1, BADGE_COLORS[spec.pose])

    hidden_face = _HIDDEN_FACE[spec.pose]
    keypoints = np.zeros((17, 3))
    marker_r = max(1.4, 0.022 * h)
    for i, (x, y) in enumerate(pts):
        name = COCO_17.names[i]
        visible = (0.0 <= x <= size - 1 and 0.0 <= y <= size - 1
                   and name not in hidden_face)
        keypoints[i] = (x, y, 1.0 if visible else 0.0)
        if visible and spec.draw_joint_markers:
            fill_disk(img, x, y, marker_r, JOINT_COLORS[i])

    if noise_sigma > 0:
        noise = rng.normal(0.0, noise_sigma, size=img.shape)
        img = np.clip(img.astype(np.float64) + noise, 0, 255).astype(np.uint8)
    return FigureRender(image=img, keypoints=keypoints, gt_boxes=gt_boxes, pose=spec.pose)


def detailed_shot_spec(garments: dict[str, GarmentSpec]) -> FigureSpec:
    """Zoomed torso crop: head and ankles fall outside the canvas."""
    return FigureSpec(
        pose=PoseLabel.DETAILED,
        center=(0.5, 0.86),
        height_frac=2.0,
        garments=garments,
    )
