"""Append-only feedback store with candidate leases.

Verdicts are persisted as JSONL the moment they are ingested and are never
rewritten; one verdict per candidate (re-review means enqueueing a fresh
candidate). Leases hand distinct pending candidates to concurrent taggers.
"""

from __future__ import annotations

import json
import os
import threading
import time
from typing import Callable, Iterable, Sequence

from .records import (
    CandidateStatus,
    FeedbackRecord,
    ReviewCandidate,
)

DEFAULT_LEASE_SECONDS = 60.0


class UnknownCandidateError(KeyError):
    pass


class DoubleReviewError(RuntimeError):
    """The candidate already has a verdict."""


class LeaseError(RuntimeError):
    """Submission without a live lease held by this tagger."""


class FeedbackStore:
    def __init__(self, records_path: str | os.PathLike | None = None,
                 lease_seconds: float = DEFAULT_LEASE_SECONDS,
                 clock: Callable[[], float] = time.time):
        self._records_path = os.fspath(records_path) if records_path else None
        self._lease_seconds = lease_seconds
        self._clock = clock
        self._lock = threading.Lock()
        self._candidates: dict[str, ReviewCandidate] = {}
        self._order: list[str] = []
        self._records: list[FeedbackRecord] = []
        self._leases: dict[str, tuple[str, float]] = {}  # id -> (tagger, expiry)
        if self._records_path and os.path.exists(self._records_path):
            with open(self._records_path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        self._records.append(FeedbackRecord.from_dict(json.loads(line)))

    # -- candidates --------------------------------------------------------

    def add_candidates(self, candidates: Iterable[ReviewCandidate]) -> None:
        with self._lock:
            reviewed = {r.candidate_id for r in self._records}
            for cand in candidates:
                if cand.candidate_id in self._candidates:
                    raise ValueError(f"duplicate candidate {cand.candidate_id}")
                if cand.candidate_id in reviewed:
                    cand.status = CandidateStatus.REVIEWED
                self._candidates[cand.candidate_id] = cand
                self._order.append(cand.candidate_id)

    def candidate(self, candidate_id: str) -> ReviewCandidate:
        try:
            return self._candidates[candidate_id]
        except KeyError:
            raise UnknownCandidateError(candidate_id) from None

    @property
    def candidates(self) -> dict[str, ReviewCandidate]:
        return dict(self._candidates)

    # -- leases ------------------------------------------------------------

    def lease_next(self, tagger_id: str) -> tuple[ReviewCandidate, float] | None:
        """Lease the first pending candidate this tagger may work on.

        Distinct concurrent taggers receive distinct candidates; an expired
        lease makes its candidate available again.
        """
        now = self._clock()
        with self._lock:
            for cid in self._order:
                cand = self._candidates[cid]
                if cand.status is not CandidateStatus.PENDING:
                    continue
                lease = self._leases.get(cid)
                if lease is not None and lease[1] > now and lease[0] != tagger_id:
                    continue
                expiry = now + self._lease_seconds
                self._leases[cid] = (tagger_id, expiry)
                return cand, expiry
            return None

    def renew_lease(self, candidate_id: str, tagger_id: str) -> float:
        now = self._clock()
        with self._lock:
            cand = self.candidate(candidate_id)
            if cand.status is not CandidateStatus.PENDING:
                raise DoubleReviewError(candidate_id)
            lease = self._leases.get(candidate_id)
            if lease is None or lease[0] != tagger_id or lease[1] <= now:
                raise LeaseError(f"no live lease on {candidate_id} for {tagger_id}")
            expiry = now + self._lease_seconds
            self._leases[candidate_id] = (tagger_id, expiry)
            return expiry

    def lease_holder(self, candidate_id: str) -> str | None:
        lease = self._leases.get(candidate_id)
        if lease is None or lease[1] <= self._clock():
            return None
        return lease[0]

    # -- verdicts ----------------------------------------------------------

    def ingest(self, record: FeedbackRecord, require_lease: bool = False) -> None:
        """Persist one verdict; the candidate flips to reviewed.

        With ``require_lease`` the submitting tagger must hold a live lease
        (the service path); library callers may ingest directly.
        """
        with self._lock:
            cand = self.candidate(record.candidate_id)
            if cand.status is not CandidateStatus.PENDING:
                raise DoubleReviewError(record.candidate_id)
            if require_lease:
                lease = self._leases.get(record.candidate_id)
                now = self._clock()
                if lease is None or lease[0] != record.tagger_id or lease[1] <= now:
                    raise LeaseError(
                        f"verdict on {record.candidate_id} without a live lease"
                    )
            cand.status = CandidateStatus.REVIEWED
            self._leases.pop(record.candidate_id, None)
            self._records.append(record)
            if self._records_path:
                with open(self._records_path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")

    @property
    def records(self) -> list[FeedbackRecord]:
        return list(self._records)

    def stats(self) -> dict:
        with self._lock:
            now = self._clock()
            pending = [c for c in self._candidates.values()
                       if c.status is CandidateStatus.PENDING]
            leased = [cid for cid, (_, exp) in self._leases.items() if exp > now]
            by_verdict: dict[str, int] = {}
            for r in self._records:
                by_verdict[r.verdict.value] = by_verdict.get(r.verdict.value, 0) + 1
            return {
                "candidates": len(self._candidates),
                "pending": len(pending),
                "leased": len(leased),
                "reviewed": len(self._records),
                "by_verdict": by_verdict,
            }


def ingest_feedback(record: FeedbackRecord, store: FeedbackStore) -> FeedbackStore:
    """Validate and persist one verdict; returns the (mutated) store."""
    store.ingest(record)
    return store
