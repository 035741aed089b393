"""HTTP recommendation service (FastAPI).

POST /v1/recommend  {images, ugc, k} -> LookRecommendation JSON
GET  /v1/health
GET  /v1/models
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .orchestrate import DEFAULT_K, PdpRequest, RequestError, recommend_look
from .registry import ModelRegistry


class RecommendRequest(BaseModel):
    request_id: str = "req"
    images: list[str] = Field(min_length=1)
    ugc: bool = False
    k: int = Field(default=DEFAULT_K, ge=1)


def create_app(registry: ModelRegistry) -> FastAPI:
    app = FastAPI(title="looklab recommendation service")
    # the registry reference swaps atomically between requests on reload
    app.state.registry = registry

    @app.get("/v1/health")
    def health():
        return {"status": "ok"}

    @app.get("/v1/models")
    def models():
        return app.state.registry.model_info()

    @app.post("/v1/recommend")
    def recommend(req: RecommendRequest):
        pdp = PdpRequest(request_id=req.request_id, images=req.images, ugc=req.ugc)
        try:
            rec = recommend_look(pdp, app.state.registry, k=req.k)
        except RequestError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return rec.to_dict()

    return app
