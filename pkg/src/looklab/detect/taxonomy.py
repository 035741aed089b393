"""Article taxonomy: broad categories mapped to finer article types.

The taxonomy is data-driven (JSON config); DEFAULT_TAXONOMY ships the stock
seven-broad / twenty-finer layout so new article types need no code change.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ArticleTaxonomy:
    broad_categories: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        seen: dict[str, str] = {}
        for broad, finers in self.broad_categories.items():
            for finer in finers:
                if finer in seen:
                    raise ValueError(
                        f"finer type {finer!r} appears under both {seen[finer]!r} and {broad!r}"
                    )
                seen[finer] = broad

    @property
    def finer_types(self) -> tuple[str, ...]:
        return tuple(f for finers in self.broad_categories.values() for f in finers)

    def broad_of(self, finer: str) -> str:
        for broad, finers in self.broad_categories.items():
            if finer in finers:
                return broad
        raise KeyError(f"unknown article type {finer!r}")

    def __contains__(self, finer: str) -> bool:
        return any(finer in finers for finers in self.broad_categories.values())

    def subset(self, finer_types: list[str]) -> "ArticleTaxonomy":
        """Restrict to the given finer types, keeping broad grouping."""
        keep = set(finer_types)
        unknown = keep - set(self.finer_types)
        if unknown:
            raise KeyError(f"unknown article types: {sorted(unknown)}")
        broad = {
            b: tuple(f for f in finers if f in keep)
            for b, finers in self.broad_categories.items()
        }
        return ArticleTaxonomy({b: fs for b, fs in broad.items() if fs})


DEFAULT_TAXONOMY = ArticleTaxonomy(
    broad_categories={
        "Topwear": ("Women tops", "Shirts", "T-shirts"),
        "Outerwear": ("Sweaters", "SweatShirts", "Jackets", "Blazers", "Shrug", "NehruJackets"),
        "BottomWear": ("Jeans", "Trousers", "Shorts", "Track pants", "Palazzos", "Capris"),
        "Skirts": ("Skirts",),
        "Dresses": ("Women dress",),
        "Footwear": ("Sports shoes", "Casual shoes"),
        "Bags": ("Hand bags",),
    }
)


def save_taxonomy(taxonomy: ArticleTaxonomy, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(
            {"broad_categories": {b: list(f) for b, f in taxonomy.broad_categories.items()}},
            fh, indent=2, sort_keys=True,
        )
        fh.write("\n")


def load_taxonomy(path: str | os.PathLike) -> ArticleTaxonomy:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    return ArticleTaxonomy(
        broad_categories={b: tuple(f) for b, f in raw["broad_categories"].items()}
    )
