import pytest

from looklab.keypoints import COCO_17, Keypoint, KeypointSchema
from looklab.detect import ArticleTaxonomy, BoundingBox, DEFAULT_TAXONOMY, Detection
from looklab.detect.taxonomy import load_taxonomy, save_taxonomy


class TestKeypointSchema:
    def test_default_layout(self):
        assert len(COCO_17) == 17
        assert "nose" in COCO_17.head_group
        assert COCO_17.ankle_group == {"left_ankle", "right_ankle"}

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            KeypointSchema(("a", "a"), frozenset({"a"}), frozenset({"a"}))

    def test_groups_must_be_subsets(self):
        with pytest.raises(ValueError):
            KeypointSchema(("a", "b"), frozenset({"zz"}), frozenset({"b"}))

    def test_groups_must_be_disjoint(self):
        with pytest.raises(ValueError):
            KeypointSchema(("a", "b"), frozenset({"a"}), frozenset({"a", "b"}))

    def test_empty_group_rejected(self):
        with pytest.raises(ValueError):
            KeypointSchema(("a", "b"), frozenset(), frozenset({"b"}))

    def test_keypoint_confidence_bounds(self):
        with pytest.raises(ValueError):
            Keypoint(0, 0, 1.5)


class TestTaxonomy:
    def test_default_shape(self):
        assert len(DEFAULT_TAXONOMY.broad_categories) == 7
        assert len(DEFAULT_TAXONOMY.finer_types) == 20
        assert DEFAULT_TAXONOMY.broad_of("T-shirts") == "Topwear"
        assert DEFAULT_TAXONOMY.broad_of("Hand bags") == "Bags"
        assert "Skirts" in DEFAULT_TAXONOMY

    def test_duplicate_finer_types_rejected(self):
        with pytest.raises(ValueError):
            ArticleTaxonomy({"A": ("x",), "B": ("x",)})

    def test_unknown_type_lookup(self):
        with pytest.raises(KeyError):
            DEFAULT_TAXONOMY.broad_of("Socks")

    def test_subset(self):
        sub = DEFAULT_TAXONOMY.subset(["T-shirts", "Shorts"])
        assert sub.finer_types == ("T-shirts", "Shorts")
        assert set(sub.broad_categories) == {"Topwear", "BottomWear"}
        with pytest.raises(KeyError):
            DEFAULT_TAXONOMY.subset(["Socks"])

    def test_config_file_round_trip(self, tmp_path):
        path = tmp_path / "taxonomy.json"
        save_taxonomy(DEFAULT_TAXONOMY, path)
        assert load_taxonomy(path) == DEFAULT_TAXONOMY


class TestBoxInvariants:
    def test_degenerate_boxes_rejected(self):
        with pytest.raises(ValueError):
            BoundingBox(5, 0, 5, 10)
        with pytest.raises(ValueError):
            BoundingBox(0, 10, 10, 10)

    def test_detection_score_bounds(self):
        with pytest.raises(ValueError):
            Detection(BoundingBox(0, 0, 1, 1), "Shirts", 1.2)


def test_embed_config_file_round_trip(tmp_path):
    from looklab.embed import (TrainConfig, TripletLossConfig, load_train_config,
                               save_train_config)

    path = tmp_path / "embed_config.json"
    train = TrainConfig(learning_rate=1e-3, epochs=7, embedding_dim=64)
    loss = TripletLossConfig(margin=0.7, alpha=1e-4)
    save_train_config(path, train, loss)
    train2, loss2 = load_train_config(path)
    assert train2 == train
    assert loss2 == loss

    # defaults survive an empty config file
    (tmp_path / "empty.json").write_text("{}")
    dflt_train, dflt_loss = load_train_config(tmp_path / "empty.json")
    assert dflt_train.learning_rate == 5e-5
    assert dflt_train.batch_size == 32
    assert dflt_train.embedding_dim == 2048
    assert dflt_train.backbone_depth == 50
    assert dflt_loss.margin == 0.2
    assert dflt_loss.alpha == 5e-5
