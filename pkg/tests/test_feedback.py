import json

import numpy as np
import pytest

from looklab.detect import BoundingBox, Detection, GroundTruthBox, ReplayDetector
from looklab.detect.taxonomy import ArticleTaxonomy
from looklab.feedback import (
    CandidateReason,
    CandidateStatus,
    DoubleReviewError,
    FeedbackRecord,
    FeedbackStore,
    FeedbackValidationError,
    LeaseError,
    ReviewCandidate,
    UnknownCandidateError,
    Verdict,
    assemble_retrain_set,
    compare_ap,
    enqueue_candidates,
    ingest_feedback,
    load_candidates_file,
    save_candidates_file,
)


def det(score, article="Shirts", x0=0.0):
    return Detection(BoundingBox(x0, 0, x0 + 10, 10), article, score)


def candidate(cid, image="img.png", detection=None):
    return ReviewCandidate(
        candidate_id=cid,
        image_ref=image,
        detection=detection or det(0.5),
        reason=CandidateReason.LOW_SCORE,
    )


class TestEnqueue:
    def test_band_filters(self):
        dets = {"img": [det(0.95), det(0.55), det(0.10)]}
        queue = enqueue_candidates(dets, (0.3, 0.8), budget=10)
        assert len(queue) == 1
        assert queue[0].detection.score == 0.55

    def test_budget_keeps_most_uncertain(self):
        dets = {"img": [det(0.45), det(0.70)]}
        queue = enqueue_candidates(dets, (0.3, 0.8), budget=1)
        assert len(queue) == 1
        assert queue[0].detection.score == 0.45  # closer to midpoint 0.55

    def test_matches_filter_sort_oracle(self):
        rng = np.random.default_rng(4)
        dets = {}
        flat = []
        for i in range(20):
            row = [det(float(s), x0=float(j)) for j, s in enumerate(rng.uniform(0, 1, 5))]
            dets[f"img{i:02d}"] = row
            flat.extend((f"img{i:02d}", d) for d in row)
        lo, hi, budget = 0.25, 0.75, 12
        mid = (lo + hi) / 2
        oracle = [item for item in flat if lo <= item[1].score < hi]
        oracle.sort(key=lambda item: abs(item[1].score - mid))
        queue = enqueue_candidates(dets, (lo, hi), budget=budget)
        assert len(queue) == min(budget, len(oracle))
        for cand, (image_ref, d) in zip(queue, oracle):
            assert cand.image_ref == image_ref
            assert cand.detection == d

    def test_budget_respected_exactly(self):
        dets = {"img": [det(0.5, x0=i) for i in range(10)]}
        assert len(enqueue_candidates(dets, (0.4, 0.6), budget=4)) == 4

    def test_ids_deterministic(self):
        dets = {"img": [det(0.5), det(0.52, x0=20)]}
        a = enqueue_candidates(dets, (0.4, 0.6), budget=5)
        b = enqueue_candidates(dets, (0.4, 0.6), budget=5)
        assert [c.candidate_id for c in a] == [c.candidate_id for c in b]

    def test_invalid_band_or_budget(self):
        with pytest.raises(ValueError):
            enqueue_candidates({}, (0.8, 0.3), budget=1)
        with pytest.raises(ValueError):
            enqueue_candidates({}, (0.3, 0.8), budget=0)

    def test_empty_corpus_empty_queue(self):
        assert enqueue_candidates({}, (0.3, 0.8), budget=5) == []


class TestRecordValidation:
    def test_wrong_class_requires_label(self):
        with pytest.raises(FeedbackValidationError):
            FeedbackRecord(candidate_id="c", verdict=Verdict.WRONG_CLASS, tagger_id="t")

    def test_wrong_box_requires_box(self):
        with pytest.raises(FeedbackValidationError):
            FeedbackRecord(candidate_id="c", verdict=Verdict.WRONG_BOX, tagger_id="t")

    def test_missed_requires_both(self):
        with pytest.raises(FeedbackValidationError):
            FeedbackRecord(candidate_id="c", verdict=Verdict.MISSED_OBJECT,
                           tagger_id="t", corrected_label="Shirts")


class TestStore:
    def test_ingest_marks_reviewed(self):
        store = FeedbackStore()
        store.add_candidates([candidate("c1")])
        ingest_feedback(FeedbackRecord("c1", Verdict.CORRECT, tagger_id="t"), store)
        assert store.candidate("c1").status is CandidateStatus.REVIEWED
        assert len(store.records) == 1

    def test_double_review_conflict(self):
        store = FeedbackStore()
        store.add_candidates([candidate("c1")])
        store.ingest(FeedbackRecord("c1", Verdict.CORRECT, tagger_id="t"))
        with pytest.raises(DoubleReviewError):
            store.ingest(FeedbackRecord("c1", Verdict.CORRECT, tagger_id="t2"))

    def test_unknown_candidate(self):
        store = FeedbackStore()
        with pytest.raises(UnknownCandidateError):
            store.ingest(FeedbackRecord("ghost", Verdict.CORRECT, tagger_id="t"))

    def test_append_only_persistence(self, tmp_path):
        path = tmp_path / "records.jsonl"
        store = FeedbackStore(path)
        store.add_candidates([candidate(f"c{i}") for i in range(3)])
        for i in range(3):
            store.ingest(FeedbackRecord(f"c{i}", Verdict.CORRECT, tagger_id="t"))
        lines = path.read_text().strip().splitlines()
        assert len(lines) == 3
        # reload: records intact, candidate statuses recomputed
        store2 = FeedbackStore(path)
        store2.add_candidates([candidate(f"c{i}") for i in range(3)])
        assert len(store2.records) == 3
        assert all(c.status is CandidateStatus.REVIEWED
                   for c in store2.candidates.values())

    def test_records_never_overwritten(self, tmp_path):
        path = tmp_path / "records.jsonl"
        store = FeedbackStore(path)
        store.add_candidates([candidate("a"), candidate("b")])
        store.ingest(FeedbackRecord("a", Verdict.CORRECT, tagger_id="t"))
        first = path.read_text()
        store.ingest(FeedbackRecord("b", Verdict.CORRECT, tagger_id="t"))
        assert path.read_text().startswith(first)


class TestLeases:
    def make_store(self, n=3, lease_seconds=60.0):
        clock = {"now": 1000.0}
        store = FeedbackStore(lease_seconds=lease_seconds, clock=lambda: clock["now"])
        store.add_candidates([candidate(f"c{i}") for i in range(n)])
        return store, clock

    def test_distinct_candidates_to_distinct_taggers(self):
        store, _ = self.make_store()
        a, _ = store.lease_next("alice")
        b, _ = store.lease_next("bob")
        assert a.candidate_id != b.candidate_id

    def test_same_tagger_gets_same_lease(self):
        store, _ = self.make_store()
        a, _ = store.lease_next("alice")
        again, _ = store.lease_next("alice")
        assert again.candidate_id == a.candidate_id

    def test_expired_lease_recycled(self):
        store, clock = self.make_store(n=1, lease_seconds=30)
        a, _ = store.lease_next("alice")
        assert store.lease_next("bob") is None or True  # bob blocked while live
        clock["now"] += 31
        b, _ = store.lease_next("bob")
        assert b.candidate_id == a.candidate_id

    def test_verdict_requires_live_lease(self):
        store, clock = self.make_store(n=1, lease_seconds=30)
        cand, _ = store.lease_next("alice")
        clock["now"] += 31
        with pytest.raises(LeaseError):
            store.ingest(FeedbackRecord(cand.candidate_id, Verdict.CORRECT,
                                        tagger_id="alice"), require_lease=True)

    def test_renew_extends(self):
        store, clock = self.make_store(n=1, lease_seconds=30)
        cand, expiry = store.lease_next("alice")
        clock["now"] += 20
        new_expiry = store.renew_lease(cand.candidate_id, "alice")
        assert new_expiry == clock["now"] + 30 > expiry

    def test_renew_without_lease_fails(self):
        store, _ = self.make_store()
        with pytest.raises(LeaseError):
            store.renew_lease("c0", "nobody")

    def test_concurrent_taggers_disjoint(self):
        from concurrent.futures import ThreadPoolExecutor

        store, _ = self.make_store(n=8)
        with ThreadPoolExecutor(max_workers=8) as pool:
            leased = list(pool.map(lambda t: store.lease_next(f"tagger{t}"), range(8)))
        ids = [c.candidate_id for c, _ in leased if c]
        assert len(ids) == len(set(ids))


class TestAssembleRetrainSet:
    def base(self):
        return {
            "img1.png": [GroundTruthBox(BoundingBox(0, 0, 10, 10), "Shirts"),
                         GroundTruthBox(BoundingBox(20, 0, 30, 10), "Jeans")],
            "img2.png": [GroundTruthBox(BoundingBox(5, 5, 15, 15), "Shorts")],
        }

    def test_empty_feedback_is_identity(self):
        base = self.base()
        assert assemble_retrain_set(base, [], {}) == base

    def test_wrong_class_override(self):
        base = self.base()
        cand = candidate("c0", image="img1.png",
                         detection=det(0.6, article="Shirts"))
        rec = FeedbackRecord("c0", Verdict.WRONG_CLASS, tagger_id="t",
                             corrected_label="Women tops")
        out = assemble_retrain_set(base, [rec], {"c0": cand})
        assert out["img1.png"][0].article_type == "Women tops"
        assert out["img1.png"][1] == base["img1.png"][1]

    def test_wrong_box_single_difference(self):
        base = self.base()
        cand = candidate("c0", image="img2.png",
                         detection=Detection(BoundingBox(5, 5, 15, 15), "Shorts", 0.6))
        fixed = BoundingBox(4, 4, 16, 16)
        rec = FeedbackRecord("c0", Verdict.WRONG_BOX, tagger_id="t", corrected_box=fixed)
        out = assemble_retrain_set(base, [rec], {"c0": cand})
        assert out["img2.png"] == [GroundTruthBox(fixed, "Shorts")]
        assert out["img1.png"] == base["img1.png"]

    def test_missed_object_adds_box(self):
        base = self.base()
        cand = candidate("c0", image="img2.png")
        rec = FeedbackRecord("c0", Verdict.MISSED_OBJECT, tagger_id="t",
                             corrected_box=BoundingBox(50, 50, 60, 60),
                             corrected_label="Hand bags")
        out = assemble_retrain_set(base, [rec], {"c0": cand})
        assert len(out["img2.png"]) == 2
        assert out["img2.png"][1].article_type == "Hand bags"

    def test_unknown_image_rejected(self):
        cand = candidate("c0", image="ghost.png")
        rec = FeedbackRecord("c0", Verdict.CORRECT, tagger_id="t")
        rec2 = FeedbackRecord("c0", Verdict.MISSED_OBJECT, tagger_id="t",
                              corrected_box=BoundingBox(0, 0, 1, 1),
                              corrected_label="Shirts")
        from looklab.feedback import RetrainAssemblyError

        with pytest.raises(RetrainAssemblyError):
            assemble_retrain_set(self.base(), [rec2], {"c0": cand})

    def test_idempotent(self):
        base = self.base()
        cands = {
            "c0": candidate("c0", image="img1.png", detection=det(0.6, "Shirts")),
            "c1": candidate("c1", image="img2.png",
                            detection=Detection(BoundingBox(5, 5, 15, 15), "Shorts", 0.5)),
            "c2": candidate("c2", image="img1.png"),
        }
        records = [
            FeedbackRecord("c0", Verdict.WRONG_CLASS, tagger_id="t", corrected_label="Women tops"),
            FeedbackRecord("c1", Verdict.WRONG_BOX, tagger_id="t",
                           corrected_box=BoundingBox(6, 6, 14, 14)),
            FeedbackRecord("c2", Verdict.MISSED_OBJECT, tagger_id="t",
                           corrected_box=BoundingBox(40, 40, 50, 50), corrected_label="Skirts"),
        ]
        once = assemble_retrain_set(base, records, cands)
        twice = assemble_retrain_set(once, records, cands)
        assert once == twice

    def test_matches_hand_merge_on_twenty_images(self):
        rng = np.random.default_rng(8)
        base = {}
        for i in range(20):
            base[f"img{i:02d}.png"] = [
                GroundTruthBox(BoundingBox(j * 12, 0, j * 12 + 10, 10), "Shirts")
                for j in range(2)
            ]
        cands = {}
        records = []
        expected = {img: list(boxes) for img, boxes in base.items()}
        for i in range(0, 20, 2):
            image = f"img{i:02d}.png"
            cid = f"c{i}"
            target = base[image][i % 2]
            cands[cid] = candidate(
                cid, image=image, detection=Detection(target.box, "Shirts", 0.5))
            if i % 4 == 0:
                records.append(FeedbackRecord(cid, Verdict.WRONG_CLASS, tagger_id="t",
                                              corrected_label="Jeans"))
                expected[image][i % 2] = GroundTruthBox(target.box, "Jeans")
            else:
                moved = BoundingBox(target.box.x_min + 1, 1,
                                    target.box.x_max + 1, 11)
                records.append(FeedbackRecord(cid, Verdict.WRONG_BOX, tagger_id="t",
                                              corrected_box=moved))
                expected[image][i % 2] = GroundTruthBox(moved, "Shirts")
        out = assemble_retrain_set(base, records, cands)
        assert out == expected


class TestCompareAp:
    taxonomy = ArticleTaxonomy({"Topwear": ("Shirts",), "BottomWear": ("Jeans",)})

    def gts(self):
        return {
            "a.png": [GroundTruthBox(BoundingBox(0, 0, 10, 10), "Shirts"),
                      GroundTruthBox(BoundingBox(20, 0, 30, 10), "Jeans")],
            "b.png": [GroundTruthBox(BoundingBox(0, 0, 10, 10), "Shirts")],
        }

    def test_identical_models_zero_delta(self):
        gts = self.gts()
        dets = {img: [Detection(g.box, g.article_type, 0.9) for g in boxes]
                for img, boxes in gts.items()}
        model = ReplayDetector(dets)
        result = compare_ap(model, model, gts, taxonomy=self.taxonomy)
        assert all(delta == 0.0 for _, _, _, delta in result.rows)

    def test_label_noise_correction_positive_delta(self):
        gts = self.gts()
        noisy = {
            "a.png": [Detection(BoundingBox(0, 0, 10, 10), "Jeans", 0.9),  # wrong class
                      Detection(BoundingBox(20, 0, 30, 10), "Jeans", 0.9)],
            "b.png": [Detection(BoundingBox(0, 0, 10, 10), "Shirts", 0.9)],
        }
        fixed = {img: [Detection(g.box, g.article_type, 0.9) for g in boxes]
                 for img, boxes in gts.items()}
        result = compare_ap(ReplayDetector(noisy), ReplayDetector(fixed), gts,
                            taxonomy=self.taxonomy)
        assert result.delta("Topwear") > 0
        csv = result.to_csv()
        assert csv.startswith("broad_category,ap_before,ap_after,delta")


def test_candidates_file_round_trip(tmp_path):
    cands = [candidate("c0"), candidate("c1", image="other.png", detection=det(0.7, "Jeans"))]
    path = tmp_path / "cands.jsonl"
    save_candidates_file(cands, path)
    assert load_candidates_file(path) == cands
