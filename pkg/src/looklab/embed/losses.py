"""Triplet training losses and their analytic gradients.

The total loss is the margin ranking term plus an alpha-weighted norm
regularizer that keeps embeddings from drifting to arbitrary scale:

    total(a, p, n) = max(0, m + d2(a, p) - d2(a, n))
                     + alpha * (|a|^2 + |p|^2 + |n|^2) / (3 d)

where d2 is squared Euclidean distance and d the embedding size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_MARGIN = 0.2
DEFAULT_ALPHA = 5e-5


class DimensionMismatchError(ValueError):
    """Embedding vectors disagree in dimension."""


@dataclass(frozen=True)
class TripletLossConfig:
    """margin and alpha are the loss hyperparameters; the norm-regularizer
    weight tau is always 1/(3d), derived from the embedding size."""

    margin: float = DEFAULT_MARGIN
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if self.margin <= 0:
            raise ValueError("margin must be > 0")
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")

    @staticmethod
    def tau(d: int) -> float:
        return 1.0 / (3.0 * d)


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return x, y


def sq_euclidean(x, y) -> float:
    """Squared Euclidean distance, sum of squared component differences."""
    x, y = _pair(x, y)
    diff = x - y
    return float(diff @ diff)


def triplet_margin_loss(xa, xp, xn, m: float = DEFAULT_MARGIN) -> float:
    """max(0, m + d2(anchor, positive) - d2(anchor, negative))."""
    if m <= 0:
        raise ValueError("margin must be > 0")
    return max(0.0, m + sq_euclidean(xa, xp) - sq_euclidean(xa, xn))


def embedding_norm_loss(xa, xp, xn) -> float:
    """(|a|^2 + |p|^2 + |n|^2) / (3 d)."""
    xa, xp = _pair(xa, xp)
    _, xn = _pair(xp, xn)
    d = xa.shape[-1]
    tau = TripletLossConfig.tau(d)
    return float(tau * (xa @ xa + xp @ xp + xn @ xn))


def total_loss(xa, xp, xn, cfg: TripletLossConfig = TripletLossConfig()) -> float:
    """Margin ranking term plus alpha-weighted norm regularizer."""
    return triplet_margin_loss(xa, xp, xn, cfg.margin) + cfg.alpha * embedding_norm_loss(xa, xp, xn)


def total_loss_grad(xa, xp, xn,
                    cfg: TripletLossConfig = TripletLossConfig()
                    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic gradients of total_loss w.r.t. (anchor, positive, negative).

    The hinge contributes only when active: d/da = 2(n - p), d/dp = -2(a - p),
    d/dn = 2(a - n). The norm term adds 2 alpha tau v for each vector v. At
    the hinge kink the subgradient with the hinge counted active is returned.
    """
    xa, xp = _pair(xa, xp)
    _, xn = _pair(xp, xn)
    d = xa.shape[-1]
    two_at = 2.0 * cfg.alpha * TripletLossConfig.tau(d)
    ga = two_at * xa
    gp = two_at * xp
    gn = two_at * xn
    if cfg.margin + sq_euclidean(xa, xp) - sq_euclidean(xa, xn) >= 0:
        ga = ga + 2.0 * (xn - xp)
        gp = gp - 2.0 * (xa - xp)
        gn = gn + 2.0 * (xa - xn)
    return ga, gp, gn
