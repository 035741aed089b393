"""Triplet assembly from cross-domain (wild, catalog) pairs."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass

import numpy as np

from ..manifests import read_jsonl, write_jsonl

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ImagePair:
    """One wild (street/UGC) view and the matching catalog image of a garment."""

    wild_path: str
    catalog_path: str
    garment_id: str
    article_type: str


@dataclass(frozen=True)
class Triplet:
    """Anchor is the wild image; positive is the same garment's catalog image;
    negative is a catalog image of a different garment of the same article type."""

    anchor_path: str
    positive_path: str
    negative_path: str
    garment_id: str
    negative_garment_id: str
    article_type: str

    def __post_init__(self):
        if self.negative_garment_id == self.garment_id:
            raise ValueError("negative must come from a different garment")


def load_pairs_manifest(path: str | os.PathLike) -> list[ImagePair]:
    """JSONL of {wild_path, catalog_path, garment_id, article_type}."""
    base = os.path.dirname(os.fspath(path))

    def resolve(p: str) -> str:
        return p if os.path.isabs(p) else os.path.join(base, p)

    return [
        ImagePair(
            wild_path=resolve(rec["wild_path"]),
            catalog_path=resolve(rec["catalog_path"]),
            garment_id=rec["garment_id"],
            article_type=rec["article_type"],
        )
        for rec in read_jsonl(path)
    ]


def save_pairs_manifest(pairs: list[ImagePair], path: str | os.PathLike) -> None:
    write_jsonl(path, (
        {
            "wild_path": p.wild_path,
            "catalog_path": p.catalog_path,
            "garment_id": p.garment_id,
            "article_type": p.article_type,
        }
        for p in pairs
    ))


def build_triplets(pairs: list[ImagePair], seed: int = 0) -> list[Triplet]:
    """One triplet per pair; the negative is drawn uniformly (seeded) from
    catalog images of other garments with the same article type.

    Pairs whose article type has a single garment are skipped with a warning.
    """
    rng = np.random.default_rng(seed)
    by_type: dict[str, dict[str, list[str]]] = {}
    for pair in pairs:
        by_type.setdefault(pair.article_type, {}).setdefault(
            pair.garment_id, []
        ).append(pair.catalog_path)

    triplets: list[Triplet] = []
    for pair in pairs:
        candidates = [
            (gid, path)
            for gid, paths in sorted(by_type[pair.article_type].items())
            if gid != pair.garment_id
            for path in paths
        ]
        if not candidates:
            logger.warning(
                "skipping pair for garment %s: article type %r has a single garment",
                pair.garment_id, pair.article_type,
            )
            continue
        neg_gid, neg_path = candidates[int(rng.integers(len(candidates)))]
        triplets.append(
            Triplet(
                anchor_path=pair.wild_path,
                positive_path=pair.catalog_path,
                negative_path=neg_path,
                garment_id=pair.garment_id,
                negative_garment_id=neg_gid,
                article_type=pair.article_type,
            )
        )
    return triplets
