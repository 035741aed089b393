"""Session-scoped fixtures: the synthetic world and the trained tiny models.

Training runs once per session and everything downstream (pipeline tests,
CLI tests, the acceptance suite) shares the artifacts.
"""

import time
from dataclasses import replace

import pytest

from looklab import imageio
from looklab.detect import GridDetectorConfig, train_grid_detector
from looklab.embed import (
    TINY_TRAIN_CONFIG,
    TripletLossConfig,
    build_triplets,
    train_embedding_model,
)
from looklab.keypoints import TINY_KEYPOINT_CONFIG, train_keypoint_model
from looklab.pipeline import ModelRegistry, save_registry
from looklab.pose import TINY_POSE_CONFIG, train_pose_model
from looklab.retrieve import CatalogEntry, index_catalog
from looklab.synth import build_keypoint_dataset, build_pose_dataset, build_world

WORLD_SIZE = 96
EMBED_CONFIG = replace(TINY_TRAIN_CONFIG, epochs=40, learning_rate=1e-3,
                       semi_hard_mining=True, input_size=48)
EMBED_LOSS = TripletLossConfig(margin=1.0)


class TrainClock:
    """Accumulates model-training wall time for the end-to-end budget check."""

    def __init__(self):
        self.seconds = 0.0

    def timed(self, fn, *args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        self.seconds += time.perf_counter() - t0
        return out


@pytest.fixture(scope="session")
def train_clock():
    return TrainClock()


@pytest.fixture(scope="session")
def world(tmp_path_factory):
    root = tmp_path_factory.mktemp("world")
    return build_world(root, per_type=20, n_train_scenes=240, n_queries=50,
                       seed=7, size=WORLD_SIZE)


@pytest.fixture(scope="session")
def keypoint_data():
    return build_keypoint_dataset(200, seed=11, size=WORLD_SIZE)


@pytest.fixture(scope="session")
def keypoint_model(keypoint_data, train_clock):
    return train_clock.timed(
        train_keypoint_model, keypoint_data[:160], TINY_KEYPOINT_CONFIG,
        epochs=30, seed=0,
    )


@pytest.fixture(scope="session")
def pose_data():
    return build_pose_dataset(250, seed=3, size=WORLD_SIZE)


@pytest.fixture(scope="session")
def pose_model(pose_data, train_clock):
    return train_clock.timed(
        train_pose_model, pose_data[:200], TINY_POSE_CONFIG, epochs=25, seed=0,
    )


@pytest.fixture(scope="session")
def detector(world, train_clock):
    scenes = [(imageio.load_image(p), gts) for p, gts in world.train_scenes.items()]
    cfg = GridDetectorConfig(classes=world.types, input_size=WORLD_SIZE, grid=12)
    return train_clock.timed(
        train_grid_detector, scenes, cfg, epochs=60, learning_rate=1.5e-3, seed=0,
    )


@pytest.fixture(scope="session")
def embed_models(world, train_clock):
    models = {}
    for broad in world.broad_categories:
        triplets = build_triplets(world.pairs_by_broad[broad], seed=1)
        models[broad] = train_clock.timed(
            train_embedding_model, triplets, EMBED_CONFIG, EMBED_LOSS,
        )
    return models


@pytest.fixture(scope="session")
def catalog_entries(world, embed_models):
    entries = []
    for pid, path in sorted(world.catalog_paths.items()):
        article_type = world.catalog_types[pid]
        broad = world.taxonomy.broad_of(article_type)
        vec = embed_models[broad].embed(imageio.load_image(path))
        entries.append(CatalogEntry(pid, article_type, broad, vec,
                                    metadata={"image_path": path}))
    return entries


@pytest.fixture(scope="session")
def registry(world, keypoint_model, pose_model, detector, embed_models, catalog_entries):
    return ModelRegistry(
        keypoint_model=keypoint_model,
        pose_model=pose_model,
        detector=detector,
        embed_models=embed_models,
        index=index_catalog(catalog_entries),
        taxonomy=world.taxonomy,
    )


@pytest.fixture(scope="session")
def registry_dir(registry, catalog_entries, tmp_path_factory):
    root = tmp_path_factory.mktemp("registry")
    save_registry(registry, root, catalog_entries=catalog_entries)
    return root
