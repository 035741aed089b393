from .registry import ModelRegistry, load_registry, save_registry
from .orchestrate import (
    ArticleRecommendation,
    DEFAULT_K,
    LookRecommendation,
    PdpRequest,
    RequestError,
    Stage,
    StageTiming,
    profile_request,
    recommend_look,
    select_full_shot,
)
from .batch import run_batch
from .service import create_app

__all__ = [
    "ArticleRecommendation",
    "DEFAULT_K",
    "LookRecommendation",
    "ModelRegistry",
    "PdpRequest",
    "RequestError",
    "Stage",
    "StageTiming",
    "create_app",
    "load_registry",
    "profile_request",
    "recommend_look",
    "run_batch",
    "save_registry",
    "select_full_shot",
]
