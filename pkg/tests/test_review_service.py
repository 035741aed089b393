import numpy as np
import pytest
from fastapi.testclient import TestClient

from looklab import imageio
from looklab.detect import BoundingBox, Detection
from looklab.feedback import (
    CandidateReason,
    FeedbackStore,
    ReviewCandidate,
    create_review_app,
)


@pytest.fixture()
def service(tmp_path):
    clock = {"now": 5000.0}
    records_path = tmp_path / "records.jsonl"
    store = FeedbackStore(records_path, lease_seconds=30.0, clock=lambda: clock["now"])
    image_path = tmp_path / "scene.png"
    imageio.save_image(np.full((32, 32, 3), 128, dtype=np.uint8), image_path)
    store.add_candidates([
        ReviewCandidate(
            candidate_id=f"cand-{i:05d}",
            image_ref=str(image_path),
            detection=Detection(BoundingBox(2, 2, 20, 20), "Shirts", 0.5),
            reason=CandidateReason.LOW_SCORE,
        )
        for i in range(5)
    ])
    app = create_review_app(store)
    return TestClient(app), store, clock, records_path


def test_next_leases_candidate(service):
    client, store, _, _ = service
    resp = client.get("/v1/review/next", params={"tagger": "alice"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["candidate_id"] == "cand-00000"
    assert body["image_url"].endswith("cand-00000")
    assert "Shirts" in body["taxonomy"]
    assert body["lease_expires_at"] == 5030.0
    # the image is servable
    img = client.get(body["image_url"])
    assert img.status_code == 200
    assert img.headers["content-type"] == "image/png"


def test_empty_queue_204(tmp_path):
    store = FeedbackStore()
    client = TestClient(create_review_app(store))
    assert client.get("/v1/review/next", params={"tagger": "t"}).status_code == 204


def test_verdict_round_trip(service):
    client, store, _, records_path = service
    body = client.get("/v1/review/next", params={"tagger": "alice"}).json()
    resp = client.post("/v1/review/verdict", json={
        "candidate_id": body["candidate_id"],
        "tagger_id": "alice",
        "verdict": "correct",
    })
    assert resp.status_code == 200
    assert len(store.records) == 1
    assert records_path.read_text().count("\n") == 1


def test_verdict_validation_mirror(service):
    client, _, _, _ = service
    body = client.get("/v1/review/next", params={"tagger": "alice"}).json()
    resp = client.post("/v1/review/verdict", json={
        "candidate_id": body["candidate_id"],
        "tagger_id": "alice",
        "verdict": "wrong_class",
    })
    assert resp.status_code == 422


def test_double_review_conflict(service):
    client, _, _, _ = service
    body = client.get("/v1/review/next", params={"tagger": "alice"}).json()
    payload = {"candidate_id": body["candidate_id"], "tagger_id": "alice",
               "verdict": "correct"}
    assert client.post("/v1/review/verdict", json=payload).status_code == 200
    assert client.post("/v1/review/verdict", json=payload).status_code == 409


def test_expired_lease_gone(service):
    client, _, clock, _ = service
    body = client.get("/v1/review/next", params={"tagger": "alice"}).json()
    clock["now"] += 31
    resp = client.post("/v1/review/verdict", json={
        "candidate_id": body["candidate_id"], "tagger_id": "alice",
        "verdict": "correct",
    })
    assert resp.status_code == 410


def test_renew_endpoint(service):
    client, _, clock, _ = service
    body = client.get("/v1/review/next", params={"tagger": "alice"}).json()
    clock["now"] += 10
    resp = client.post("/v1/review/renew", json={
        "candidate_id": body["candidate_id"], "tagger_id": "alice"})
    assert resp.status_code == 200
    assert resp.json()["lease_expires_at"] == clock["now"] + 30


def test_concurrent_tabs_get_distinct_candidates(service):
    client, _, _, _ = service
    a = client.get("/v1/review/next", params={"tagger": "tab1"}).json()
    b = client.get("/v1/review/next", params={"tagger": "tab2"}).json()
    assert a["candidate_id"] != b["candidate_id"]


def test_stats(service):
    client, _, _, _ = service
    body = client.get("/v1/review/next", params={"tagger": "alice"}).json()
    client.post("/v1/review/verdict", json={
        "candidate_id": body["candidate_id"], "tagger_id": "alice",
        "verdict": "wrong_box",
        "corrected_box": {"x_min": 1, "y_min": 1, "x_max": 5, "y_max": 5},
    })
    stats = client.get("/v1/review/stats").json()
    assert stats["candidates"] == 5
    assert stats["reviewed"] == 1
    assert stats["by_verdict"] == {"wrong_box": 1}
