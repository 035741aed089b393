"""The synthetic wardrobe world: garments, scenes, catalog images, and the
dataset builders for every trainable component.

This is the fixture universe the tests and the end-to-end acceptance run
live in: colored striped garments worn by stick figures, with clean catalog
renders and noisy "worn" scenes standing in for in-shop vs street photos.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import imageio
from ..detect.boxes import GroundTruthBox, pad_box, clamp_box
from ..detect.taxonomy import DEFAULT_TAXONOMY, ArticleTaxonomy
from ..embed.triplets import ImagePair
from ..keypoints.model import KeypointSample
from ..pose.labels import POSE_ORDER, PoseLabel
from .figures import FigureSpec, FigureRender, GarmentSpec, detailed_shot_spec, render_figure
from .draw import hsv_color

DEFAULT_WORLD_TYPES = ("T-shirts", "Shorts", "Casual shoes")

_GOLDEN = 0.6180339887498949


def make_wardrobe(types: tuple[str, ...] = DEFAULT_WORLD_TYPES, per_type: int = 20,
                  seed: int = 0) -> dict[str, list[GarmentSpec]]:
    """Garments with evenly spaced hues within each article type.

    Retrieval is partitioned by article type, so only same-type garments
    compete; even spacing keeps every competing pair distinguishable.
    """
    rng = np.random.default_rng(seed)
    wardrobe: dict[str, list[GarmentSpec]] = {}
    for ti, t in enumerate(types):
        slug = t.lower().replace(" ", "-")
        garments = []
        for i in range(per_type):
            base_hue = (i / per_type + ti * _GOLDEN) % 1.0
            # coprime stride: garments with close base hues get distant
            # block hues, so every same-type pair separates in color space
            block_hue = (i * 7 / per_type + 0.31 + ti * _GOLDEN) % 1.0
            base = hsv_color(base_hue, 0.9, 0.9)
            block = hsv_color(block_hue, 0.9, 0.75)
            stripe = hsv_color(base_hue + 0.5, 0.9, 0.55 + 0.35 * float(rng.random()))
            garments.append(GarmentSpec(
                garment_id=f"{slug}-{i:03d}",
                article_type=t,
                base_color=base,
                block_color=block,
                stripe_color=stripe,
                stripe_period=int(rng.integers(4, 8)),
                stripe_phase=int(rng.integers(0, 6)),
            ))
        wardrobe[t] = garments
    return wardrobe


def scene_spec(garments: dict[str, GarmentSpec], rng: np.random.Generator,
               pose: PoseLabel = PoseLabel.FRONT) -> FigureSpec:
    """A jittered full-shot figure (head and ankles clearly on canvas)."""
    if pose is PoseLabel.DETAILED:
        return detailed_shot_spec(garments)
    return FigureSpec(
        pose=pose,
        center=(0.5 + float(rng.uniform(-0.03, 0.03)),
                0.5 + float(rng.uniform(-0.025, 0.025))),
        height_frac=float(rng.uniform(0.78, 0.86)),
        lean=float(rng.uniform(-0.04, 0.04)),
        garments=garments,
    )


def catalog_image(garment: GarmentSpec, size: int = 64) -> np.ndarray:
    """Clean in-shop render: the garment worn on a marker-free, badge-free
    figure over a plain background, cropped to the garment box."""
    spec = FigureSpec(
        pose=PoseLabel.FRONT,
        garments={garment.article_type: garment},
        draw_badge=False,
        draw_joint_markers=False,
    )
    render = render_figure(spec, size=size, rng=np.random.default_rng(1),
                           bg=242, noise_sigma=0.0)
    gt = next(b for b in render.gt_boxes if b.article_type == garment.article_type)
    clamped = clamp_box(pad_box(gt.box, 0.06), size, size)
    x0, y0 = int(clamped.x_min), int(clamped.y_min)
    x1, y1 = int(np.ceil(clamped.x_max)), int(np.ceil(clamped.y_max))
    return render.image[y0:y1, x0:x1].copy()


# ---------------------------------------------------------------------------
# Standalone datasets for the keypoint and pose models


def build_keypoint_dataset(n: int, seed: int = 0,
                           wardrobe: dict[str, list[GarmentSpec]] | None = None,
                           size: int = 64) -> list[KeypointSample]:
    """Figures at varied framings: full, ankles cut, head cut, detail zoom.

    Visibility flags are honest, so the full-shot ground truth is derivable
    from the keypoints alone.
    """
    rng = np.random.default_rng(seed)
    wardrobe = wardrobe or make_wardrobe(seed=seed + 1)
    samples = []
    for i in range(n):
        garments = {t: g[int(rng.integers(len(g)))] for t, g in wardrobe.items()}
        kind = i % 6
        if kind in (0, 1, 2):  # full shot
            spec = scene_spec(garments, rng, pose=POSE_ORDER[int(rng.integers(0, 4))])
        elif kind == 3:  # ankles cut below the canvas
            spec = FigureSpec(
                pose=PoseLabel.FRONT,
                center=(0.5 + float(rng.uniform(-0.03, 0.03)),
                        float(rng.uniform(0.72, 0.80))),
                height_frac=float(rng.uniform(0.78, 0.86)),
                garments=garments,
            )
        elif kind == 4:  # head cut above the canvas
            spec = FigureSpec(
                pose=PoseLabel.FRONT,
                center=(0.5 + float(rng.uniform(-0.03, 0.03)),
                        float(rng.uniform(0.16, 0.24))),
                height_frac=float(rng.uniform(0.78, 0.86)),
                garments=garments,
            )
        else:  # detail zoom
            spec = detailed_shot_spec(garments)
        render = render_figure(spec, size=size, rng=rng)
        samples.append(KeypointSample(image=render.image, keypoints=render.keypoints))
    return samples


def build_pose_dataset(n: int, seed: int = 0,
                       wardrobe: dict[str, list[GarmentSpec]] | None = None,
                       size: int = 64) -> list[tuple[np.ndarray, PoseLabel]]:
    """Round-robin over the five pose classes."""
    rng = np.random.default_rng(seed)
    wardrobe = wardrobe or make_wardrobe(seed=seed + 1)
    samples = []
    for i in range(n):
        garments = {t: g[int(rng.integers(len(g)))] for t, g in wardrobe.items()}
        pose = POSE_ORDER[i % len(POSE_ORDER)]
        render = render_figure(scene_spec(garments, rng, pose=pose), size=size, rng=rng)
        samples.append((render.image, pose))
    return samples


def full_shot_truth(keypoints: np.ndarray) -> bool:
    """Ground-truth full-shot flag from keypoint visibility: any head joint
    and both ankles visible (same rule the heuristic applies to confidences)."""
    from ..keypoints.schema import COCO_17

    names = list(COCO_17.names)
    head = any(keypoints[names.index(n), 2] > 0 for n in COCO_17.head_group)
    ankles = all(keypoints[names.index(n), 2] > 0 for n in COCO_17.ankle_group)
    return head and ankles


# ---------------------------------------------------------------------------
# The end-to-end world


@dataclass
class PdpFixture:
    request_id: str
    image_paths: list[str]
    full_shot_path: str
    planted: dict[str, str]  # article_type -> garment/product id
    full_shot_gts: list[GroundTruthBox] = field(default_factory=list)


@dataclass
class WardrobeWorld:
    root: Path
    types: tuple[str, ...]
    taxonomy: ArticleTaxonomy
    wardrobe: dict[str, list[GarmentSpec]]
    catalog_paths: dict[str, str]            # product_id -> image path
    catalog_types: dict[str, str]            # product_id -> article type
    train_scenes: dict[str, list[GroundTruthBox]] = field(default_factory=dict)
    pairs_by_broad: dict[str, list[ImagePair]] = field(default_factory=dict)
    pdps: list[PdpFixture] = field(default_factory=list)

    @property
    def broad_categories(self) -> list[str]:
        return sorted({self.taxonomy.broad_of(t) for t in self.types})


def build_world(root: str | os.PathLike,
                types: tuple[str, ...] = DEFAULT_WORLD_TYPES,
                per_type: int = 20,
                n_train_scenes: int = 120,
                n_queries: int = 50,
                seed: int = 0,
                size: int = 64) -> WardrobeWorld:
    """Write the fixture universe to disk.

    Layout: catalog/ (clean product images), scenes/ (training full shots
    with ground-truth boxes), wild/ (jitter-padded garment crops from the
    scenes, the street side of training pairs), pdp/ (query sets of four
    views each, exactly one front full shot).
    """
    root = Path(root)
    for sub in ("catalog", "scenes", "wild", "pdp"):
        (root / sub).mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    wardrobe = make_wardrobe(types, per_type=per_type, seed=seed)
    taxonomy = DEFAULT_TAXONOMY.subset(list(types))
    world = WardrobeWorld(
        root=root, types=types, taxonomy=taxonomy, wardrobe=wardrobe,
        catalog_paths={}, catalog_types={},
    )

    for t in types:
        for garment in wardrobe[t]:
            path = root / "catalog" / f"{garment.garment_id}.png"
            imageio.save_image(catalog_image(garment, size=size), path)
            world.catalog_paths[garment.garment_id] = str(path)
            world.catalog_types[garment.garment_id] = t

    pairs_by_broad: dict[str, list[ImagePair]] = {b: [] for b in world.broad_categories}
    wild_counter: dict[str, int] = {}
    for i in range(n_train_scenes):
        garments = {t: wardrobe[t][int(rng.integers(per_type))] for t in types}
        render = render_figure(scene_spec(garments, rng), size=size, rng=rng)
        scene_path = root / "scenes" / f"train_{i:04d}.png"
        imageio.save_image(render.image, scene_path)
        world.train_scenes[str(scene_path)] = render.gt_boxes
        for gt in render.gt_boxes:
            garment = garments[gt.article_type]
            # jitter mimicking detector box slop: center shift plus pad noise
            from ..detect.boxes import BoundingBox

            dx = float(rng.uniform(-0.06, 0.06)) * gt.box.width
            dy = float(rng.uniform(-0.06, 0.06)) * gt.box.height
            shifted = BoundingBox(gt.box.x_min + dx, gt.box.y_min + dy,
                                  gt.box.x_max + dx, gt.box.y_max + dy)
            padded = clamp_box(pad_box(shifted, float(rng.uniform(0.01, 0.12))), size, size)
            x0, y0 = int(padded.x_min), int(padded.y_min)
            x1, y1 = int(np.ceil(padded.x_max)), int(np.ceil(padded.y_max))
            crop = render.image[y0:y1, x0:x1]
            k = wild_counter.get(garment.garment_id, 0)
            wild_counter[garment.garment_id] = k + 1
            wild_path = root / "wild" / f"{garment.garment_id}_{k:03d}.png"
            imageio.save_image(crop, wild_path)
            pairs_by_broad[taxonomy.broad_of(gt.article_type)].append(ImagePair(
                wild_path=str(wild_path),
                catalog_path=world.catalog_paths[garment.garment_id],
                garment_id=garment.garment_id,
                article_type=gt.article_type,
            ))
    world.pairs_by_broad = pairs_by_broad

    distractor_poses = (PoseLabel.DETAILED, PoseLabel.BACK, PoseLabel.LEFT)
    for qi in range(n_queries):
        garments = {t: wardrobe[t][int(rng.integers(per_type))] for t in types}
        image_paths: list[str] = []
        full_shot_path = ""
        full_shot_gts: list[GroundTruthBox] = []
        front_slot = int(rng.integers(4))
        d = 0
        for j in range(4):
            if j == front_slot:
                spec = scene_spec(garments, rng)
            else:
                spec = scene_spec(garments, rng, pose=distractor_poses[d % 3])
                d += 1
            render = render_figure(spec, size=size, rng=rng)
            path = root / "pdp" / f"q{qi:03d}_{j}.png"
            imageio.save_image(render.image, path)
            image_paths.append(str(path))
            if j == front_slot:
                full_shot_path = str(path)
                full_shot_gts = render.gt_boxes
        world.pdps.append(PdpFixture(
            request_id=f"q{qi:03d}",
            image_paths=image_paths,
            full_shot_path=full_shot_path,
            planted={t: garments[t].garment_id for t in types},
            full_shot_gts=full_shot_gts,
        ))
    return world
