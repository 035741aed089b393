import numpy as np
import pytest

from looklab.pose import (
    POSE_ORDER,
    PoseLabel,
    PoseModel,
    classify_pose,
    evaluate_pose_model,
    load_pose_model,
    save_pose_model,
)
from looklab.synth import badge_rect, detailed_shot_spec
from looklab.synth.figures import FigureSpec

from conftest import WORLD_SIZE


class FakePoseModel:
    """Stands in for a trained model; returns canned score vectors."""

    def __init__(self, scores):
        self._scores = np.asarray(scores, dtype=np.float64)

    def scores(self, image):
        return self._scores


def test_argmax_class_and_score():
    model = FakePoseModel([0.9, 0.02, 0.03, 0.03, 0.02])
    label, conf = classify_pose(np.zeros((8, 8, 3), np.uint8), model)
    assert label is PoseLabel.FRONT
    assert conf == pytest.approx(0.9)


def test_uniform_ties_break_to_canonical_order():
    model = FakePoseModel([0.2, 0.2, 0.2, 0.2, 0.2])
    label, conf = classify_pose(np.zeros((8, 8, 3), np.uint8), model)
    assert label is PoseLabel.FRONT
    assert conf == pytest.approx(0.2)


def test_tie_between_later_classes():
    model = FakePoseModel([0.1, 0.3, 0.3, 0.2, 0.1])
    label, _ = classify_pose(np.zeros((8, 8, 3), np.uint8), model)
    assert label is PoseLabel.BACK  # first of the tied pair in canonical order


def _badge_features(image):
    """Mean color over the generator's badge regions (full-shot + zoomed)."""
    spec = FigureSpec(pose=PoseLabel.FRONT, height_frac=0.82)
    x0, y0, x1, y1 = (int(v) for v in badge_rect(spec, WORLD_SIZE))
    spec_d = detailed_shot_spec({})
    dx0, dy0, dx1, dy1 = (int(v) for v in badge_rect(spec_d, WORLD_SIZE))
    full = image[y0:y1, x0:x1].reshape(-1, 3).mean(axis=0)
    zoom = image[dy0:dy1, dx0:dx1].reshape(-1, 3).mean(axis=0)
    return np.concatenate([full, zoom])


def test_linear_probe_oracle_separates_the_cue(pose_data):
    """The orientation cue must be linearly separable before the network is
    asked to learn it."""
    from sklearn.linear_model import LogisticRegression

    train, test = pose_data[:200], pose_data[200:]
    X = np.array([_badge_features(img) for img, _ in train])
    y = [label.value for _, label in train]
    probe = LogisticRegression(max_iter=5000).fit(X, y)
    Xt = np.array([_badge_features(img) for img, _ in test])
    yt = [label.value for _, label in test]
    assert probe.score(Xt, yt) >= 0.95


def test_held_out_accuracy(pose_model, pose_data):
    test = pose_data[200:]
    correct = sum(classify_pose(img, pose_model)[0] is label for img, label in test)
    assert correct / len(test) >= 0.95


def test_scores_form_probability_vector(pose_model, pose_data):
    probs = pose_model.scores(pose_data[0][0])
    assert probs.shape == (5,)
    assert np.all(probs >= 0)
    assert abs(probs.sum() - 1.0) < 1e-6


def test_evaluation_artifacts(pose_model, pose_data):
    cm, pr = evaluate_pose_model(pose_model, pose_data[200:230])
    assert cm.total == 30
    csv = cm.to_csv()
    assert csv.splitlines()[0].startswith("truth\\pred,front,back")
    labels = [row[0] for row in pr]
    assert labels == list(POSE_ORDER)


def test_checkpoint_round_trip(pose_model, pose_data, tmp_path):
    path = tmp_path / "pose.pt"
    save_pose_model(pose_model, path)
    loaded = load_pose_model(path)
    img = pose_data[0][0]
    np.testing.assert_array_equal(loaded.scores(img), pose_model.scores(img))


def test_empty_dataset_rejected():
    from looklab.pose import TINY_POSE_CONFIG, train_pose_model

    with pytest.raises(ValueError):
        train_pose_model([], TINY_POSE_CONFIG)
