"""Batch runner: one LookRecommendation JSON line per PDP manifest record."""

from __future__ import annotations

import os

from ..manifests import read_jsonl
from .orchestrate import DEFAULT_K, PdpRequest, recommend_look
from .registry import ModelRegistry


def run_batch(registry: ModelRegistry, manifest_path: str | os.PathLike,
              out_path: str | os.PathLike, k: int = DEFAULT_K) -> int:
    """Process {request_id, images, ugc?} records; returns the request count.

    Output is canonical JSON (sorted keys), so identical inputs and models
    produce byte-identical files.
    """
    count = 0
    with open(out_path, "w", encoding="utf-8") as out:
        for rec in read_jsonl(manifest_path):
            req = PdpRequest(
                request_id=rec["request_id"],
                images=list(rec["images"]),
                ugc=bool(rec.get("ugc", False)),
            )
            result = recommend_look(req, registry, k=k)
            out.write(result.to_json() + "\n")
            count += 1
    return count
