"""Precision and recall at K over a batch of retrieval results."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .scoring import RetrievalResult


@dataclass
class PrecisionRecallTable:
    """Macro-averaged P@K and R@K per requested K."""

    rows: dict[int, tuple[float, float]]
    num_queries: int
    num_queries_with_relevant: int

    def precision(self, k: int) -> float:
        return self.rows[k][0]

    def recall(self, k: int) -> float:
        return self.rows[k][1]

    def to_csv(self) -> str:
        ks = sorted(self.rows)
        header = ",".join([f"P@{k},R@{k}" for k in ks])
        values = ",".join(f"{self.rows[k][0]:.6f},{self.rows[k][1]:.6f}" for k in ks)
        return header + "\n" + values + "\n"


def precision_recall_at_k(results: Sequence[RetrievalResult],
                          relevance: Mapping[str, set[str]],
                          ks: Sequence[int]) -> PrecisionRecallTable:
    """P@K = mean over all queries of |top-K hits| / K.
    R@K = mean over queries with a non-empty relevant set of
    |top-K hits| / |relevant|; empty-relevance queries contribute 0 to P@K
    and are excluded from R@K.
    """
    if any(k < 1 for k in ks):
        raise ValueError("every K must be >= 1")
    for result in results:
        if result.query_ref not in relevance:
            raise ValueError(f"query {result.query_ref!r} has no relevance entry")
    rows: dict[int, tuple[float, float]] = {}
    n = len(results)
    for k in ks:
        p_sum = 0.0
        r_sum = 0.0
        r_count = 0
        for result in results:
            relevant = relevance[result.query_ref]
            hits = sum(1 for pid in result.product_ids[:k] if pid in relevant)
            p_sum += hits / k
            if relevant:
                r_sum += hits / len(relevant)
                r_count += 1
        rows[k] = (
            p_sum / n if n else 0.0,
            r_sum / r_count if r_count else 0.0,
        )
    return PrecisionRecallTable(
        rows=rows,
        num_queries=n,
        num_queries_with_relevant=sum(1 for r in results if relevance[r.query_ref]),
    )
