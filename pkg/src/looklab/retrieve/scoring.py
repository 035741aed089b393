"""Similarity scoring and exact top-K retrieval.

All modes normalize to "higher is better" at the boundary: cosine returns
the cosine value, euclidean returns the negated squared distance, combined
returns the reciprocal-rank-fusion score. Ties always break by ascending
product_id.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .store import CatalogIndex

RRF_C = 60  # constant in the reciprocal-rank fusion score 1/(c + rank)
DEFAULT_K = 14


class ZeroVectorError(ValueError):
    """Cosine similarity is undefined for a zero vector."""


class ScoringMode(str, Enum):
    COSINE = "cosine"
    EUCLIDEAN = "euclidean"
    COMBINED = "combined"


@dataclass
class RetrievalResult:
    query_ref: str
    ranked: list[tuple[str, float]]

    @property
    def product_ids(self) -> list[str]:
        return [pid for pid, _ in self.ranked]


def cosine_similarity(x, y) -> float:
    """Standard cosine, clamped to [-1, 1] against rounding."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        raise ZeroVectorError("cosine similarity undefined for zero vectors")
    return float(np.clip((x @ y) / (nx * ny), -1.0, 1.0))


def _partition_scores(index: CatalogIndex, query: np.ndarray, article_type: str,
                      mode: ScoringMode) -> tuple[list[str], np.ndarray]:
    ids, matrix = index.partition(article_type)
    if not ids:
        return [], np.zeros(0)
    if query.shape[0] != matrix.shape[1]:
        raise ValueError(
            f"query dimension {query.shape[0]} does not match partition "
            f"{article_type!r} dimension {matrix.shape[1]}"
        )
    if mode is ScoringMode.COSINE:
        qn = np.linalg.norm(query)
        norms = np.linalg.norm(matrix, axis=1)
        if qn == 0.0:
            raise ZeroVectorError("cosine similarity undefined for zero query")
        if np.any(norms == 0.0):
            zero_id = ids[int(np.where(norms == 0.0)[0][0])]
            raise ZeroVectorError(f"cosine similarity undefined for zero entry {zero_id!r}")
        scores = np.clip((matrix @ query) / (norms * qn), -1.0, 1.0)
    elif mode is ScoringMode.EUCLIDEAN:
        scores = -np.sum((matrix - query) ** 2, axis=1)
    else:
        raise ValueError(f"no direct scores for mode {mode}")
    return ids, scores


def _ranked_ids(ids: list[str], scores: np.ndarray) -> list[int]:
    """Indices sorted by descending score, ties by ascending product_id."""
    return sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))


def top_k(index: CatalogIndex, query, article_type: str, k: int = DEFAULT_K,
          mode: ScoringMode = ScoringMode.COSINE,
          query_ref: str = "") -> RetrievalResult:
    """Exact top-k within the article-type partition.

    An unknown/empty partition yields an empty result; k beyond the
    partition size returns everything.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    query = np.asarray(query, dtype=np.float64)
    if mode is ScoringMode.COMBINED:
        return combined_score_rank(index, query, article_type, k, query_ref=query_ref)
    ids, scores = _partition_scores(index, query, article_type, mode)
    order = _ranked_ids(ids, scores)[:k]
    return RetrievalResult(
        query_ref=query_ref,
        ranked=[(ids[i], float(scores[i])) for i in order],
    )


def combined_score_rank(index: CatalogIndex, query, article_type: str,
                        k: int = DEFAULT_K, query_ref: str = "") -> RetrievalResult:
    """Reciprocal-rank fusion of the cosine and euclidean rankings:
    score = sum over modes of 1/(RRF_C + rank), ranks 1-based."""
    if k < 1:
        raise ValueError("k must be >= 1")
    query = np.asarray(query, dtype=np.float64)
    ids, cos_scores = _partition_scores(index, query, article_type, ScoringMode.COSINE)
    if not ids:
        return RetrievalResult(query_ref=query_ref, ranked=[])
    _, euc_scores = _partition_scores(index, query, article_type, ScoringMode.EUCLIDEAN)

    fused = np.zeros(len(ids))
    for scores in (cos_scores, euc_scores):
        for rank, i in enumerate(_ranked_ids(ids, scores), start=1):
            fused[i] += 1.0 / (RRF_C + rank)
    order = _ranked_ids(ids, fused)[:k]
    return RetrievalResult(
        query_ref=query_ref,
        ranked=[(ids[i], float(fused[i])) for i in order],
    )
