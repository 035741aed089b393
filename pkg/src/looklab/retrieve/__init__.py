from .store import (
    CatalogEntry,
    CatalogIndex,
    DuplicateProductError,
    index_catalog,
    load_catalog_file,
    save_catalog_file,
)
from .scoring import (
    DEFAULT_K,
    RRF_C,
    RetrievalResult,
    ScoringMode,
    ZeroVectorError,
    combined_score_rank,
    cosine_similarity,
    top_k,
)
from .metrics import PrecisionRecallTable, precision_recall_at_k

__all__ = [
    "CatalogEntry",
    "CatalogIndex",
    "DEFAULT_K",
    "DuplicateProductError",
    "PrecisionRecallTable",
    "RRF_C",
    "RetrievalResult",
    "ScoringMode",
    "ZeroVectorError",
    "combined_score_rank",
    "cosine_similarity",
    "index_catalog",
    "load_catalog_file",
    "precision_recall_at_k",
    "save_catalog_file",
    "top_k",
]
