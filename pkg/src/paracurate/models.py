"""Domain types for segments, users, workflows, and annotation tasks.

Documents are persisted as plain JSON-compatible dicts; the dataclasses here
are the typed views used by the engine code.  Every piece of corpus text is
normalized to Unicode NFC before it is stored or compared.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Iterable, Mapping, Optional

from .errors import ValidationError

LANGUAGE_TAG_RE = re.compile(r"^[a-z]{2,3}_[A-Z][a-z]{3}$")

VERSION_LABELS = ("v1", "v2", "v3", "v4")

TASK_TRANSLATION = "translation"
TASK_COPYEDIT = "copyedit"

STATUS_UNASSIGNED = "unassigned"
STATUS_ASSIGNED = "assigned"
STATUS_COMPLETED = "completed"

WORKFLOW_ACTIVE = "active"
WORKFLOW_COMPLETED = "completed"

DIRECTION_LTR = "ltr"
DIRECTION_RTL = "rtl"


def nfc(text: str) -> str:
    """Return the NFC normalization of ``text``."""
    return unicodedata.normalize("NFC", text)


def to_rfc3339(dt: datetime) -> str:
    """Serialize a datetime as an RFC 3339 UTC string."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).isoformat()


def parse_rfc3339(value: str) -> datetime:
    """Parse an RFC 3339 string (``Z`` suffix accepted) into an aware datetime."""
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    dt = datetime.fromisoformat(value)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


def validate_language_tag(code: str) -> str:
    """Check the ``<iso639>_<iso15924>`` shape of a language tag."""
    if not LANGUAGE_TAG_RE.match(code):
        raise ValidationError(f"invalid language tag: {code!r}")
    return code


@dataclass(frozen=True)
class LanguageTag:
    """A language+script code with its resolved writing direction."""

    code: str
    direction: str = DIRECTION_LTR

    def __post_init__(self) -> None:
        validate_language_tag(self.code)
        if self.direction not in (DIRECTION_LTR, DIRECTION_RTL):
            raise ValidationError(f"invalid direction: {self.direction!r}")


@dataclass
class TargetVersion:
    label: str
    text: str
    author_user_id: str
    timestamp: str

    def to_doc(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "text": self.text,
            "authorUserId": self.author_user_id,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "TargetVersion":
        return cls(
            label=doc["label"],
            text=doc["text"],
            author_user_id=doc["authorUserId"],
            timestamp=doc["timestamp"],
        )


@dataclass
class MultilingualSegment:
    """One corpus datum: per-language source texts plus target-version history."""

    dataset_id: str
    segment_id: str
    sources: dict[str, str] = field(default_factory=dict)
    target_versions: list[TargetVersion] = field(default_factory=list)

    @property
    def doc_id(self) -> str:
        return segment_doc_id(self.dataset_id, self.segment_id)

    def normalized(self) -> "MultilingualSegment":
        """Return a copy with every text field NFC-normalized."""
        return MultilingualSegment(
            dataset_id=self.dataset_id,
            segment_id=self.segment_id,
            sources={validate_language_tag(k): nfc(v) for k, v in self.sources.items()},
            target_versions=[
                TargetVersion(v.label, nfc(v.text), v.author_user_id, v.timestamp)
                for v in self.target_versions
            ],
        )

    def validate(self) -> None:
        if not self.dataset_id or not self.segment_id:
            raise ValidationError("datasetId and segmentId are required")
        for code in self.sources:
            validate_language_tag(code)
        labels = [v.label for v in self.target_versions]
        if labels != list(VERSION_LABELS[: len(labels)]):
            raise ValidationError(f"target version labels must run v1..v4 without gaps, got {labels}")

    def latest_version(self) -> Optional[TargetVersion]:
        return self.target_versions[-1] if self.target_versions else None

    def to_doc(self) -> dict[str, Any]:
        return {
            "datasetId": self.dataset_id,
            "segmentId": self.segment_id,
            "sources": dict(self.sources),
            "targetVersions": [v.to_doc() for v in self.target_versions],
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "MultilingualSegment":
        return cls(
            dataset_id=doc["datasetId"],
            segment_id=doc["segmentId"],
            sources=dict(doc.get("sources", {})),
            target_versions=[TargetVersion.from_doc(v) for v in doc.get("targetVersions", [])],
        )


def segment_doc_id(dataset_id: str, segment_id: str) -> str:
    return f"{dataset_id}/{segment_id}"


def next_version_label(segment: MultilingualSegment) -> Optional[str]:
    n = len(segment.target_versions)
    return VERSION_LABELS[n] if n < len(VERSION_LABELS) else None


@dataclass
class UserProfile:
    user_id: str
    is_active_translator: bool = False
    is_active_verifier: bool = False
    verifier_level: int = 0
    preferred_source_languages: list[str] = field(default_factory=list)
    ui_language: str = "eng_Latn"
    max_open_tasks: int = 5
    secret_hash: Optional[str] = None

    def validate(self) -> None:
        if not self.user_id:
            raise ValidationError("userId is required")
        if self.verifier_level not in (0, 1, 2, 3):
            raise ValidationError(f"verifierLevel must be 0..3, got {self.verifier_level}")
        if (self.verifier_level == 0) != (not self.is_active_verifier):
            raise ValidationError("verifierLevel must be 0 exactly when the user is not an active verifier")
        if self.is_active_translator and not self.preferred_source_languages:
            raise ValidationError("active translators need at least one preferred source language")
        for code in self.preferred_source_languages:
            validate_language_tag(code)
        validate_language_tag(self.ui_language)
        if self.max_open_tasks < 1:
            raise ValidationError("maxOpenTasks must be positive")

    def to_doc(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "userId": self.user_id,
            "isActiveTranslator": self.is_active_translator,
            "isActiveVerifier": self.is_active_verifier,
            "verifierLevel": self.verifier_level,
            "preferredSourceLanguages": list(self.preferred_source_languages),
            "uiLanguage": self.ui_language,
            "maxOpenTasks": self.max_open_tasks,
        }
        if self.secret_hash is not None:
            doc["secretHash"] = self.secret_hash
        return doc

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "UserProfile":
        return cls(
            user_id=doc["userId"],
            is_active_translator=doc.get("isActiveTranslator", False),
            is_active_verifier=doc.get("isActiveVerifier", False),
            verifier_level=doc.get("verifierLevel", 0),
            preferred_source_languages=list(doc.get("preferredSourceLanguages", [])),
            ui_language=doc.get("uiLanguage", "eng_Latn"),
            max_open_tasks=doc.get("maxOpenTasks", 5),
            secret_hash=doc.get("secretHash"),
        )


@dataclass
class DatasetManifest:
    dataset_id: str
    language_tags: list[str]
    segment_count: int
    target_language: str
    split: Optional[str] = None

    def to_doc(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "datasetId": self.dataset_id,
            "languageTags": sorted(self.language_tags),
            "segmentCount": self.segment_count,
            "targetLanguage": self.target_language,
        }
        if self.split is not None:
            doc["split"] = self.split
        return doc

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "DatasetManifest":
        return cls(
            dataset_id=doc["datasetId"],
            language_tags=list(doc.get("languageTags", [])),
            segment_count=doc.get("segmentCount", 0),
            target_language=doc["targetLanguage"],
            split=doc.get("split"),
        )


@dataclass
class Workflow:
    workflow_id: str
    dataset_id: str
    segment_id: str
    priority: int
    status: str = WORKFLOW_ACTIVE

    def to_doc(self) -> dict[str, Any]:
        return {
            "workflowId": self.workflow_id,
            "datasetId": self.dataset_id,
            "segmentId": self.segment_id,
            "priority": self.priority,
            "status": self.status,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "Workflow":
        return cls(
            workflow_id=doc["workflowId"],
            dataset_id=doc["datasetId"],
            segment_id=doc["segmentId"],
            priority=doc["priority"],
            status=doc.get("status", WORKFLOW_ACTIVE),
        )


def workflow_doc_id(dataset_id: str, segment_id: str) -> str:
    return f"{dataset_id}/{segment_id}"


@dataclass
class AnnotationTask:
    """A translation or copyedit unit of work with its lease state."""

    task_id: str
    workflow_id: str
    dataset_id: str
    segment_id: str
    type: str
    round: int
    status: str = STATUS_UNASSIGNED
    assignee: Optional[str] = None
    lease_expires_at: Optional[str] = None
    assignee_verifier_level: Optional[int] = None
    result_text: Optional[str] = None
    edited_flag: Optional[bool] = None
    completed_by: Optional[str] = None
    completed_at: Optional[str] = None
    skips: list[dict[str, str]] = field(default_factory=list)

    def validate(self) -> None:
        if self.type not in (TASK_TRANSLATION, TASK_COPYEDIT):
            raise ValidationError(f"invalid task type: {self.type!r}")
        if self.type == TASK_TRANSLATION and self.round != 0:
            raise ValidationError("translation tasks use round 0")
        if self.type == TASK_COPYEDIT and self.round not in (1, 2, 3):
            raise ValidationError("copyedit rounds run 1..3")
        if self.status == STATUS_ASSIGNED and (self.assignee is None or self.lease_expires_at is None):
            raise ValidationError("assigned tasks carry an assignee and a lease expiry")
        if self.status == STATUS_COMPLETED:
            if self.result_text is None:
                raise ValidationError("completed tasks carry a result text")
            if self.type == TASK_COPYEDIT and self.edited_flag is None:
                raise ValidationError("completed copyedits carry the edited flag")

    def to_doc(self) -> dict[str, Any]:
        return {
            "taskId": self.task_id,
            "workflowId": self.workflow_id,
            "datasetId": self.dataset_id,
            "segmentId": self.segment_id,
            "type": self.type,
            "round": self.round,
            "status": self.status,
            "assignee": self.assignee,
            "leaseExpiresAt": self.lease_expires_at,
            "assigneeVerifierLevel": self.assignee_verifier_level,
            "resultText": self.result_text,
            "editedFlag": self.edited_flag,
            "completedBy": self.completed_by,
            "completedAt": self.completed_at,
            "skips": list(self.skips),
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "AnnotationTask":
        return cls(
            task_id=doc["taskId"],
            workflow_id=doc["workflowId"],
            dataset_id=doc["datasetId"],
            segment_id=doc["segmentId"],
            type=doc["type"],
            round=doc["round"],
            status=doc.get("status", STATUS_UNASSIGNED),
            assignee=doc.get("assignee"),
            lease_expires_at=doc.get("leaseExpiresAt"),
            assignee_verifier_level=doc.get("assigneeVerifierLevel"),
            result_text=doc.get("resultText"),
            edited_flag=doc.get("editedFlag"),
            completed_by=doc.get("completedBy"),
            completed_at=doc.get("completedAt"),
            skips=list(doc.get("skips", [])),
        )


def task_doc_id(workflow_id: str, task_type: str, round_: int) -> str:
    """Deterministic task id; re-creating the same task is a no-op by construction."""
    if task_type == TASK_TRANSLATION:
        return f"{workflow_id}/translation"
    return f"{workflow_id}/copyedit-{round_}"


def version_label_for_task(task_type: str, round_: int) -> str:
    """Translation produces v1; copyedit round r produces v(r+1)."""
    if task_type == TASK_TRANSLATION:
        return VERSION_LABELS[0]
    return VERSION_LABELS[round_]


def sort_key_priority_round_task(
    task: AnnotationTask, priorities: Mapping[str, int]
) -> tuple[int, int, str]:
    return (priorities.get(task.workflow_id, 0), task.round, task.task_id)


def distinct(values: Iterable[str]) -> list[str]:
    """Order-preserving de-duplication."""
    return list(dict.fromkeys(values))
