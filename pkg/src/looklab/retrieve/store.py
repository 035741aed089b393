"""Catalog embedding store: immutable index partitioned by article type.

File format: one JSON header line {model_version, category}, then binary
records {u16 product_id len, utf-8 bytes, u16 article_type len, utf-8 bytes,
u32 d, d little-endian float32}.
"""

from __future__ import annotations

import json
import os
import struct
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from ..detect.taxonomy import ArticleTaxonomy, DEFAULT_TAXONOMY


class DuplicateProductError(ValueError):
    """Two catalog entries share a product_id."""


@dataclass
class CatalogEntry:
    product_id: str
    article_type: str
    broad_category: str
    embedding: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.embedding = np.asarray(self.embedding, dtype=np.float64)
        if self.embedding.ndim != 1:
            raise ValueError(f"embedding must be 1-D, got shape {self.embedding.shape}")
        if not np.all(np.isfinite(self.embedding)):
            raise ValueError(f"non-finite embedding for {self.product_id}")


class CatalogIndex:
    """Immutable exact-scan index. Queries are safe from any thread; a
    rebuild produces a fresh index the caller swaps in."""

    def __init__(self, partitions: dict[str, tuple[list[str], np.ndarray]],
                 entries: dict[str, CatalogEntry]):
        self._partitions = partitions
        self._entries = entries

    @property
    def article_types(self) -> list[str]:
        return sorted(self._partitions)

    def __len__(self) -> int:
        return len(self._entries)

    def entry(self, product_id: str) -> CatalogEntry:
        return self._entries[product_id]

    def partition(self, article_type: str) -> tuple[list[str], np.ndarray]:
        """(product_ids, embedding matrix) for one article type; empty when
        the type is unknown."""
        if article_type not in self._partitions:
            return [], np.zeros((0, 0))
        return self._partitions[article_type]


def index_catalog(entries: Iterable[CatalogEntry]) -> CatalogIndex:
    """Build the exact-scan index. Duplicate product ids and dimension
    mismatches within a broad category are errors."""
    entries = list(entries)
    by_id: dict[str, CatalogEntry] = {}
    dims_by_broad: dict[str, int] = {}
    for e in entries:
        if e.product_id in by_id:
            raise DuplicateProductError(f"duplicate product_id {e.product_id!r}")
        by_id[e.product_id] = e
        d = e.embedding.shape[0]
        seen = dims_by_broad.setdefault(e.broad_category, d)
        if seen != d:
            raise ValueError(
                f"embedding dimension mismatch in category {e.broad_category!r}: {seen} vs {d}"
            )
    partitions: dict[str, tuple[list[str], np.ndarray]] = {}
    by_type: dict[str, list[CatalogEntry]] = {}
    for e in entries:
        by_type.setdefault(e.article_type, []).append(e)
    for article_type, group in by_type.items():
        group = sorted(group, key=lambda e: e.product_id)
        ids = [e.product_id for e in group]
        matrix = np.stack([e.embedding for e in group])
        partitions[article_type] = (ids, matrix)
    return CatalogIndex(partitions, by_id)


def save_catalog_file(entries: Iterable[CatalogEntry], path: str | os.PathLike,
                      model_version: str = "1", category: str = "") -> None:
    with open(path, "wb") as fh:
        header = json.dumps(
            {"model_version": model_version, "category": category}, sort_keys=True
        )
        fh.write(header.encode("utf-8") + b"\n")
        for e in entries:
            pid = e.product_id.encode("utf-8")
            art = e.article_type.encode("utf-8")
            vec = np.asarray(e.embedding, dtype="<f4")
            fh.write(struct.pack("<H", len(pid)) + pid)
            fh.write(struct.pack("<H", len(art)) + art)
            fh.write(struct.pack("<I", vec.shape[0]))
            fh.write(vec.tobytes())


def load_catalog_file(path: str | os.PathLike,
                      taxonomy: ArticleTaxonomy = DEFAULT_TAXONOMY,
                      metadata: Mapping[str, dict] | None = None) -> tuple[list[CatalogEntry], dict]:
    """Returns (entries, header). Broad categories come from the taxonomy."""
    entries = []
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode("utf-8"))
        while True:
            raw = fh.read(2)
            if not raw:
                break
            (n,) = struct.unpack("<H", raw)
            pid = fh.read(n).decode("utf-8")
            (n,) = struct.unpack("<H", fh.read(2))
            art = fh.read(n).decode("utf-8")
            (d,) = struct.unpack("<I", fh.read(4))
            vec = np.frombuffer(fh.read(4 * d), dtype="<f4").astype(np.float64)
            if vec.shape[0] != d:
                raise ValueError(f"truncated catalog record for {pid!r}")
            entries.append(
                CatalogEntry(
                    product_id=pid,
                    article_type=art,
                    broad_category=taxonomy.broad_of(art),
                    embedding=vec,
                    metadata=dict((metadata or {}).get(pid, {})),
                )
            )
    return entries, header
