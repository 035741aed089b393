import numpy as np
import pytest

from looklab.keypoints import (
    COCO_17,
    ConfigurationError,
    KeypointModelConfig,
    KeypointSample,
    TINY_KEYPOINT_CONFIG,
    is_full_shot,
    load_keypoint_model,
    save_keypoint_model,
    train_keypoint_model,
)
from looklab.synth import build_keypoint_dataset, full_shot_truth

from conftest import WORLD_SIZE


def test_default_config_matches_reference_architecture():
    cfg = KeypointModelConfig()
    assert (cfg.deconv_layers, cfg.deconv_filters, cfg.deconv_kernel, cfg.deconv_stride) \
        == (3, 256, 4, 2)
    assert cfg.heatmap_stride == 4


def test_invalid_configs_rejected():
    with pytest.raises(ConfigurationError):
        KeypointModelConfig(deconv_layers=0)
    with pytest.raises(ConfigurationError):
        KeypointModelConfig(heatmap_sigma=0)


def test_empty_dataset_rejected():
    with pytest.raises(ConfigurationError):
        train_keypoint_model([], TINY_KEYPOINT_CONFIG)


def test_all_invisible_dataset_rejected():
    img = np.zeros((64, 64, 3), dtype=np.uint8)
    kps = np.zeros((17, 3))
    with pytest.raises(ConfigurationError):
        train_keypoint_model([KeypointSample(img, kps)], TINY_KEYPOINT_CONFIG)


def test_wrong_keypoint_count_rejected():
    img = np.zeros((64, 64, 3), dtype=np.uint8)
    kps = np.ones((5, 3))
    with pytest.raises(ConfigurationError):
        train_keypoint_model([KeypointSample(img, kps)], TINY_KEYPOINT_CONFIG)


def test_held_out_error_under_two_cells(keypoint_model, keypoint_data):
    stride = keypoint_model.config.heatmap_stride
    scale = keypoint_model.config.input_size / WORLD_SIZE
    errors = []
    for sample in keypoint_data[160:]:
        kps = keypoint_model.infer(sample.image)
        for j, name in enumerate(COCO_17.names):
            x, y, visible = sample.keypoints[j]
            if visible > 0:
                err_px = np.hypot(kps[name].x - x, kps[name].y - y)
                errors.append(err_px * scale / stride)
    assert np.mean(errors) < 2.0


def test_inference_emits_heatmap_per_keypoint(keypoint_model, keypoint_data):
    heatmaps = keypoint_model.predict_heatmaps(keypoint_data[0].image)
    assert heatmaps.shape[0] == len(COCO_17)
    assert np.all(heatmaps >= 0)


def test_inference_deterministic(keypoint_model, keypoint_data):
    image = keypoint_data[0].image
    a = keypoint_model.predict_heatmaps(image)
    b = keypoint_model.predict_heatmaps(image)
    np.testing.assert_array_equal(a, b)


def test_full_shot_decisions_track_truth(keypoint_model, keypoint_data):
    agree = 0
    held_out = keypoint_data[160:]
    for sample in held_out:
        kps = keypoint_model.infer(sample.image)
        agree += is_full_shot(kps, COCO_17, 0.5) == full_shot_truth(sample.keypoints)
    assert agree / len(held_out) >= 0.9


def test_checkpoint_round_trip(keypoint_model, keypoint_data, tmp_path):
    path = tmp_path / "kp.pt"
    save_keypoint_model(keypoint_model, path)
    loaded = load_keypoint_model(path)
    assert loaded.config == keypoint_model.config
    assert loaded.schema == keypoint_model.schema
    image = keypoint_data[3].image
    np.testing.assert_array_equal(
        loaded.predict_heatmaps(image), keypoint_model.predict_heatmaps(image))


def test_concurrent_inference_consistent(keypoint_model, keypoint_data):
    from concurrent.futures import ThreadPoolExecutor

    image = keypoint_data[5].image
    expected = keypoint_model.predict_heatmaps(image)
    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(lambda _: keypoint_model.predict_heatmaps(image), range(8)))
    for r in results:
        np.testing.assert_array_equal(r, expected)
