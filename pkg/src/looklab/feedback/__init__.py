from .records import (
    CandidateReason,
    CandidateStatus,
    FeedbackRecord,
    FeedbackValidationError,
    ReviewCandidate,
    Verdict,
    candidate_from_dict,
    load_candidates_file,
    save_candidates_file,
)
from .queue import enqueue_candidates
from .store import (
    DEFAULT_LEASE_SECONDS,
    DoubleReviewError,
    FeedbackStore,
    LeaseError,
    UnknownCandidateError,
    ingest_feedback,
)
from .retrain import RetrainAssemblyError, assemble_retrain_set
from .compare import ApComparison, compare_ap
from .service import create_review_app

__all__ = [
    "ApComparison",
    "CandidateReason",
    "CandidateStatus",
    "DEFAULT_LEASE_SECONDS",
    "DoubleReviewError",
    "FeedbackRecord",
    "FeedbackStore",
    "FeedbackValidationError",
    "LeaseError",
    "RetrainAssemblyError",
    "ReviewCandidate",
    "UnknownCandidateError",
    "Verdict",
    "assemble_retrain_set",
    "candidate_from_dict",
    "compare_ap",
    "create_review_app",
    "enqueue_candidates",
    "ingest_feedback",
    "load_candidates_file",
    "save_candidates_file",
]
