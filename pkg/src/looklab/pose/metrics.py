"""Confusion matrix and per-class precision/recall for the pose classifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .labels import POSE_ORDER, PoseLabel


@dataclass
class ConfusionMatrix:
    """counts[t][p] = number of samples with truth t predicted as p."""

    counts: np.ndarray
    labels: tuple[PoseLabel, ...] = field(default=POSE_ORDER)

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        n = len(self.labels)
        if self.counts.shape != (n, n):
            raise ValueError(f"expected {n}x{n} counts, got {self.counts.shape}")
        if np.any(self.counts < 0):
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def support(self, label: PoseLabel) -> int:
        return int(self.counts[self.labels.index(label)].sum())

    def to_csv(self) -> str:
        header = "truth\\pred," + ",".join(l.value for l in self.labels)
        rows = [
            label.value + "," + ",".join(str(c) for c in row)
            for label, row in zip(self.labels, self.counts)
        ]
        return "\n".join([header, *rows]) + "\n"


def confusion_matrix(truths: Sequence[PoseLabel], preds: Sequence[PoseLabel],
                     labels: tuple[PoseLabel, ...] = POSE_ORDER) -> ConfusionMatrix:
    if len(truths) != len(preds):
        raise ValueError(f"length mismatch: {len(truths)} truths vs {len(preds)} predictions")
    if len(truths) == 0:
        raise ValueError("need at least one (truth, prediction) pair")
    index = {label: i for i, label in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for t, p in zip(truths, preds):
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(counts=counts, labels=labels)


def precision_recall_per_class(cm: ConfusionMatrix) -> list[tuple[PoseLabel, float, float]]:
    """Precision = diagonal / column sum, recall = diagonal / row sum; 0/0 is 0."""
    out = []
    for i, label in enumerate(cm.labels):
        tp = float(cm.counts[i, i])
        col = float(cm.counts[:, i].sum())
        row = float(cm.counts[i, :].sum())
        precision = tp / col if col > 0 else 0.0
        recall = tp / row if row > 0 else 0.0
        out.append((label, precision, recall))
    return out
