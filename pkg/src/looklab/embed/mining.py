"""Semi-hard negative selection within a batch of embeddings."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .losses import sq_euclidean


class MiningError(ValueError):
    """The batch lacks a positive for the anchor."""


def mine_semi_hard(anchor_idx: int, embeddings: np.ndarray, labels: Sequence,
                   m: float) -> int | None:
    """Pick a negative for the anchor from the batch.

    The positive is the nearest same-label example. Preference order:
      1. semi-hard: negatives with d_ap < d_an < d_ap + m, closest first;
      2. otherwise the hardest negative beyond the margin (smallest
         d_an >= d_ap + m);
      3. otherwise (every negative at least as close as the positive) None.

    Equal distances resolve to the lowest batch index.
    """
    embeddings = np.asarray(embeddings, dtype=np.float64)
    labels = list(labels)
    anchor = embeddings[anchor_idx]
    anchor_label = labels[anchor_idx]

    d_ap = None
    for i, label in enumerate(labels):
        if i == anchor_idx or label != anchor_label:
            continue
        d = sq_euclidean(anchor, embeddings[i])
        if d_ap is None or d < d_ap:
            d_ap = d
    if d_ap is None:
        raise MiningError(f"no positive for anchor {anchor_idx} (label {anchor_label!r}) in batch")

    semi_best: tuple[float, int] | None = None
    easy_best: tuple[float, int] | None = None
    for i, label in enumerate(labels):
        if label == anchor_label:
            continue
        d_an = sq_euclidean(anchor, embeddings[i])
        if d_ap < d_an < d_ap + m:
            if semi_best is None or d_an < semi_best[0]:
                semi_best = (d_an, i)
        elif d_an >= d_ap + m:
            if easy_best is None or d_an < easy_best[0]:
                easy_best = (d_an, i)
    if semi_best is not None:
        return semi_best[1]
    if easy_best is not None:
        return easy_best[1]
    return None
