from .figures import (
    BADGE_COLORS,
    FigureRender,
    FigureSpec,
    GarmentSpec,
    badge_rect,
    detailed_shot_spec,
    joint_positions,
    render_figure,
)
from .wardrobe import (
    DEFAULT_WORLD_TYPES,
    PdpFixture,
    WardrobeWorld,
    build_keypoint_dataset,
    build_pose_dataset,
    build_world,
    catalog_image,
    full_shot_truth,
    make_wardrobe,
    scene_spec,
)

__all__ = [
    "BADGE_COLORS",
    "DEFAULT_WORLD_TYPES",
    "FigureRender",
    "FigureSpec",
    "GarmentSpec",
    "PdpFixture",
    "WardrobeWorld",
    "badge_rect",
    "build_keypoint_dataset",
    "build_pose_dataset",
    "build_world",
    "catalog_image",
    "detailed_shot_spec",
    "full_shot_truth",
    "joint_positions",
    "make_wardrobe",
    "render_figure",
    "scene_spec",
]
