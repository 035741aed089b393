import numpy as np
import pytest

from looklab import imageio
from looklab.detect import (
    BoundingBox,
    Detection,
    GridDetectorConfig,
    ReplayDetector,
    evaluate_detections,
    load_detections_file,
    load_grid_detector,
    load_gt_manifest,
    save_detections_file,
    save_grid_detector,
    save_gt_manifest,
    train_grid_detector,
)


class TestReplayDetector:
    def test_serves_recorded_detections(self):
        det = Detection(BoundingBox(0, 0, 5, 5), "Shirts", 0.9)
        replay = ReplayDetector({"img_a": [det]})
        assert replay.detect(np.zeros((4, 4, 3), np.uint8), image_ref="img_a") == [det]

    def test_unknown_ref_yields_empty(self):
        replay = ReplayDetector({})
        assert replay.detect(np.zeros((4, 4, 3), np.uint8), image_ref="nope") == []

    def test_requires_image_ref(self):
        replay = ReplayDetector({})
        with pytest.raises(ValueError):
            replay.detect(np.zeros((4, 4, 3), np.uint8))


class TestGridDetector:
    def test_held_out_map(self, world, detector):
        items = list(world.train_scenes.items())[-30:]
        dets_by = {}
        gts_by = {}
        for path, gts in items:
            dets_by[path] = detector.detect(imageio.load_image(path))
            gts_by[path] = gts
        result = evaluate_detections(dets_by, gts_by, iou_thresh=0.5)
        assert result.map_score >= 0.8

    def test_detections_satisfy_invariants(self, world, detector):
        path = next(iter(world.train_scenes))
        image = imageio.load_image(path)
        for det in detector.detect(image):
            assert det.article_type in world.types
            assert 0.0 <= det.score <= 1.0
            assert det.box.x_min < det.box.x_max
            assert det.box.y_min < det.box.y_max
            assert det.box.x_max <= image.shape[1]
            assert det.box.y_max <= image.shape[0]

    def test_scores_sorted_descending(self, world, detector):
        path = next(iter(world.train_scenes))
        dets = detector.detect(imageio.load_image(path))
        scores = [d.score for d in dets]
        assert scores == sorted(scores, reverse=True)

    def test_checkpoint_round_trip(self, world, detector, tmp_path):
        path = tmp_path / "det.pt"
        save_grid_detector(detector, path)
        loaded = load_grid_detector(path)
        assert loaded.config == detector.config
        image = imageio.load_image(next(iter(world.train_scenes)))
        assert loaded.detect(image) == detector.detect(image)

    def test_empty_dataset_rejected(self):
        with pytest.raises(ValueError):
            train_grid_detector([], GridDetectorConfig(classes=("a",)))

    def test_unknown_class_rejected(self):
        img = np.zeros((64, 64, 3), np.uint8)
        from looklab.detect import GroundTruthBox

        gts = [GroundTruthBox(BoundingBox(1, 1, 10, 10), "Mystery")]
        with pytest.raises(ValueError):
            train_grid_detector([(img, gts)], GridDetectorConfig(classes=("Shirts",)))


def test_manifest_round_trips(tmp_path):
    gts = {
        "a.png": [],
        "b.png": [
            # round-trip preserves boxes, classes and scores
        ],
    }
    from looklab.detect import GroundTruthBox

    gts = {
        "a.png": [GroundTruthBox(BoundingBox(0, 0, 5, 5), "Shirts")],
        "b.png": [GroundTruthBox(BoundingBox(1, 2, 3, 4), "Jeans"),
                  GroundTruthBox(BoundingBox(5, 5, 9, 9), "Shirts")],
    }
    gt_path = tmp_path / "gt.jsonl"
    save_gt_manifest(gts, gt_path)
    assert load_gt_manifest(gt_path) == gts

    dets = {
        "a.png": [Detection(BoundingBox(0, 0, 5, 5), "Shirts", 0.75)],
    }
    det_path = tmp_path / "dets.jsonl"
    save_detections_file(dets, det_path)
    assert load_detections_file(det_path) == dets
