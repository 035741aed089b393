"""Review HTTP API consumed by the tagger UI.

GET  /v1/review/next?tagger=...   lease the next pending candidate
POST /v1/review/verdict           submit a FeedbackRecord
POST /v1/review/renew             extend a live lease
GET  /v1/review/stats
GET  /v1/review/image/{candidate_id}
"""

from __future__ import annotations

import os

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from ..detect.boxes import BoundingBox
from ..detect.taxonomy import ArticleTaxonomy, DEFAULT_TAXONOMY
from .records import FeedbackRecord, FeedbackValidationError, Verdict
from .store import DoubleReviewError, FeedbackStore, LeaseError, UnknownCandidateError


class BoxPayload(BaseModel):
    x_min: float
    y_min: float
    x_max: float
    y_max: float


class VerdictPayload(BaseModel):
    candidate_id: str
    tagger_id: str
    verdict: str
    corrected_label: str | None = None
    corrected_box: BoxPayload | None = None


class RenewPayload(BaseModel):
    candidate_id: str
    tagger_id: str


def create_review_app(store: FeedbackStore,
                      taxonomy: ArticleTaxonomy = DEFAULT_TAXONOMY) -> FastAPI:
    app = FastAPI(title="looklab review service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    app.state.store = store

    @app.get("/v1/review/next")
    def next_candidate(tagger: str):
        leased = store.lease_next(tagger)
        if leased is None:
            return Response(status_code=204)
        cand, expiry = leased
        view = cand.to_dict()
        view["lease_expires_at"] = expiry
        view["image_url"] = f"/v1/review/image/{cand.candidate_id}"
        view["taxonomy"] = list(taxonomy.finer_types)
        return view

    @app.post("/v1/review/verdict")
    def submit_verdict(payload: VerdictPayload):
        try:
            box = payload.corrected_box
            record = FeedbackRecord(
                candidate_id=payload.candidate_id,
                verdict=Verdict(payload.verdict),
                tagger_id=payload.tagger_id,
                corrected_label=payload.corrected_label,
                corrected_box=BoundingBox(**box.model_dump()) if box else None,
            )
        except (FeedbackValidationError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        try:
            store.ingest(record, require_lease=True)
        except UnknownCandidateError:
            raise HTTPException(status_code=404, detail="unknown candidate")
        except DoubleReviewError:
            raise HTTPException(status_code=409, detail="candidate already reviewed")
        except LeaseError as exc:
            raise HTTPException(status_code=410, detail=str(exc))
        return {"status": "ok", "candidate_id": payload.candidate_id}

    @app.post("/v1/review/renew")
    def renew(payload: RenewPayload):
        try:
            expiry = store.renew_lease(payload.candidate_id, payload.tagger_id)
        except UnknownCandidateError:
            raise HTTPException(status_code=404, detail="unknown candidate")
        except DoubleReviewError:
            raise HTTPException(status_code=409, detail="candidate already reviewed")
        except LeaseError as exc:
            raise HTTPException(status_code=410, detail=str(exc))
        return {"lease_expires_at": expiry}

    @app.get("/v1/review/stats")
    def stats():
        return store.stats()

    @app.get("/v1/review/image/{candidate_id}")
    def image(candidate_id: str):
        try:
            cand = store.candidate(candidate_id)
        except UnknownCandidateError:
            raise HTTPException(status_code=404, detail="unknown candidate")
        path = cand.image_ref
        if not os.path.exists(path):
            raise HTTPException(status_code=404, detail="image file missing")
        with open(path, "rb") as fh:
            return Response(content=fh.read(), media_type="image/png")

    return app
