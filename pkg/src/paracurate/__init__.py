"""Collaborative parallel-text curation toolkit.

Tracks each multilingual segment through a translate-then-copyedit
workflow with automatic task leasing, exports multitext corpora with
per-round copyedit logs, realigns drifted bitexts against a consensus
reference, and reports copyedit statistics.
"""

from .align import AlignmentResult, edit_distance, realign_corpus, solve_assignment
from .config import SystemConfig
from .errors import (
    ConflictError,
    CurationError,
    FormatError,
    IntegrityError,
    LeaseViolationError,
    NotFoundError,
    PreconditionError,
    ProtocolError,
    ValidationError,
)
from .metrics import RoundStats, format_round_stats, round_stats, word_count
from .models import AnnotationTask, MultilingualSegment, UserProfile, Workflow
from .store import FileStore, MemoryStore, open_store

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "AnnotationTask",
    "ConflictError",
    "CurationError",
    "FileStore",
    "FormatError",
    "IntegrityError",
    "LeaseViolationError",
    "MemoryStore",
    "MultilingualSegment",
    "NotFoundError",
    "PreconditionError",
    "ProtocolError",
    "RoundStats",
    "SystemConfig",
    "UserProfile",
    "ValidationError",
    "Workflow",
    "__version__",
    "edit_distance",
    "format_round_stats",
    "open_store",
    "realign_corpus",
    "round_stats",
    "solve_assignment",
    "word_count",
]
