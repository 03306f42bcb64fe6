"""Task leasing: eligibility rules, assignment, expiry, completion, skips.

Assignment and revocation run as one serialized periodic pass; completion
and skips may race with it and with each other, guarded by the per-task
compare-and-swap in the document store.
"""

from __future__ import annotations

from datetime import datetime, timedelta
from typing import Iterable, Optional

from .config import SystemConfig
from .errors import LeaseViolationError, NotFoundError
from .models import (
    STATUS_ASSIGNED,
    STATUS_COMPLETED,
    STATUS_UNASSIGNED,
    TASK_COPYEDIT,
    TASK_TRANSLATION,
    AnnotationTask,
    UserProfile,
    nfc,
    parse_rfc3339,
    to_rfc3339,
    version_label_for_task,
)
from .store import DocumentStore, append_target_version, get_segment


def is_eligible(
    user: UserProfile,
    task: AnnotationTask,
    prior_completions: Iterable[tuple[str, str]],
    open_assignments: int = 0,
) -> bool:
    """Total predicate deciding whether ``user`` may take ``task``.

    ``prior_completions`` holds the (datasetId, segmentId) pairs the user has
    already completed a task for; a user works each segment at most once.
    """
    if task.type == TASK_TRANSLATION:
        if not user.is_active_translator:
            return False
    else:
        if not user.is_active_verifier:
            return False
        if user.verifier_level < task.round:
            return False
    if (task.dataset_id, task.segment_id) in set(prior_completions):
        return False
    if open_assignments >= user.max_open_tasks:
        return False
    return True


def completions_by_user(store: DocumentStore) -> dict[str, set[tuple[str, str]]]:
    """Map userId -> set of (datasetId, segmentId) pairs they completed."""
    history: dict[str, set[tuple[str, str]]] = {}
    for doc in store.list("annotation-tasks", {"status": STATUS_COMPLETED}):
        completer = doc.get("completedBy")
        if completer:
            history.setdefault(completer, set()).add((doc["datasetId"], doc["segmentId"]))
    return history


def open_assignment_counts(store: DocumentStore) -> dict[str, int]:
    counts: dict[str, int] = {}
    for doc in store.list("annotation-tasks", {"status": STATUS_ASSIGNED}):
        assignee = doc.get("assignee")
        if assignee:
            counts[assignee] = counts.get(assignee, 0) + 1
    return counts


def revoke_expired(store: DocumentStore, now: datetime) -> int:
    """Return expired assigned tasks to the pool; completed tasks untouched."""
    revoked = 0
    for doc in store.list("annotation-tasks", {"status": STATUS_ASSIGNED}):
        expiry = doc.get("leaseExpiresAt")
        if expiry is None or parse_rfc3339(expiry) >= now:
            continue
        changed = False

        def release(current):
            nonlocal changed
            changed = False
            if current["status"] != STATUS_ASSIGNED:
                return None
            if current.get("leaseExpiresAt") and parse_rfc3339(current["leaseExpiresAt"]) >= now:
                return None
            changed = True
            current = dict(current)
            current["status"] = STATUS_UNASSIGNED
            current["assignee"] = None
            current["leaseExpiresAt"] = None
            current["assigneeVerifierLevel"] = None
            return current

        store.update("annotation-tasks", doc["taskId"], release)
        if changed:
            revoked += 1
    return revoked


def assign_tasks(
    store: DocumentStore,
    now: datetime,
    config: Optional[SystemConfig] = None,
) -> list[tuple[str, str]]:
    """Lease unassigned tasks to eligible users; returns (taskId, userId) pairs.

    Tasks are considered in (workflow priority, round, taskId) order.  Among
    eligible users the one with the fewest open assignments wins, ties broken
    by lexicographic userId; users who skipped a task are deprioritized for
    it (but not barred, so a lone eligible user cannot deadlock the pool).
    """
    config = config or SystemConfig()
    users = [UserProfile.from_doc(d) for d in store.list("users")]
    priorities = {d["workflowId"]: d["priority"] for d in store.list("workflows")}

    # One scan covers completions (history rule), open counts, and the pool.
    history: dict[str, set[tuple[str, str]]] = {}
    open_counts: dict[str, int] = {}
    pending: list[AnnotationTask] = []
    for doc in store.list("annotation-tasks"):
        if doc["status"] == STATUS_COMPLETED and doc.get("completedBy"):
            history.setdefault(doc["completedBy"], set()).add(
                (doc["datasetId"], doc["segmentId"])
            )
        elif doc["status"] == STATUS_ASSIGNED and doc.get("assignee"):
            open_counts[doc["assignee"]] = open_counts.get(doc["assignee"], 0) + 1
        elif doc["status"] == STATUS_UNASSIGNED:
            pending.append(AnnotationTask.from_doc(doc))
    pending.sort(key=lambda t: (priorities.get(t.workflow_id, 0), t.round, t.task_id))

    assignments: list[tuple[str, str]] = []
    lease_until = to_rfc3339(now + config.lease_period)
    for task in pending:
        skippers = {s["userId"] for s in task.skips}
        candidates = [
            u
            for u in users
            if is_eligible(u, task, history.get(u.user_id, ()), open_counts.get(u.user_id, 0))
        ]
        if not candidates:
            continue
        candidates.sort(
            key=lambda u: (u.user_id in skippers, open_counts.get(u.user_id, 0), u.user_id)
        )
        chosen = candidates[0]

        def lease(current):
            if current["status"] != STATUS_UNASSIGNED:
                return None
            current = dict(current)
            current["status"] = STATUS_ASSIGNED
            current["assignee"] = chosen.user_id
            current["leaseExpiresAt"] = lease_until
            current["assigneeVerifierLevel"] = chosen.verifier_level
            return current

        updated = store.update("annotation-tasks", task.task_id, lease)
        if updated["status"] == STATUS_ASSIGNED and updated["assignee"] == chosen.user_id:
            open_counts[chosen.user_id] = open_counts.get(chosen.user_id, 0) + 1
            assignments.append((task.task_id, chosen.user_id))
    return assignments


def _load_assigned_task(store: DocumentStore, task_id: str, user_id: str, now: datetime) -> AnnotationTask:
    doc = store.get("annotation-tasks", task_id)
    if doc is None:
        raise NotFoundError(f"task {task_id} does not exist")
    task = AnnotationTask.from_doc(doc)
    if task.status != STATUS_ASSIGNED or task.assignee != user_id:
        raise LeaseViolationError(f"task {task_id} is not assigned to {user_id}")
    if task.lease_expires_at is not None and parse_rfc3339(task.lease_expires_at) < now:
        raise LeaseViolationError(f"lease on task {task_id} expired at {task.lease_expires_at}")
    return task


def complete_task(
    store: DocumentStore,
    task_id: str,
    user_id: str,
    result_text: str,
    now: datetime,
    record_at: Optional[datetime] = None,
) -> AnnotationTask:
    """Record a submission: complete the task and append the target version.

    Copyedits carry an edited flag comparing the (normalized) result against
    the previous version; submitting identical text still appends a version.
    ``now`` drives the lease check; ``record_at`` (defaulting to ``now``) is
    the stored completion stamp, so offline work replayed later carries the
    moment it was done rather than the moment it arrived.
    """
    task = _load_assigned_task(store, task_id, user_id, now)
    result = nfc(result_text)

    previous_text: Optional[str] = None
    if task.type == TASK_COPYEDIT:
        segment = get_segment(store, task.dataset_id, task.segment_id)
        if len(segment.target_versions) < task.round:
            raise NotFoundError(
                f"segment {task.dataset_id}/{task.segment_id} has no version for round {task.round}"
            )
        previous_text = segment.target_versions[task.round - 1].text

    stamp = to_rfc3339(record_at or now)

    def finish(current):
        live = AnnotationTask.from_doc(current)
        if live.status != STATUS_ASSIGNED or live.assignee != user_id:
            raise LeaseViolationError(f"task {task_id} is not assigned to {user_id}")
        current = dict(current)
        current["status"] = STATUS_COMPLETED
        current["resultText"] = result
        current["completedBy"] = user_id
        current["completedAt"] = stamp
        current["assignee"] = None
        current["leaseExpiresAt"] = None
        if live.type == TASK_COPYEDIT:
            current["editedFlag"] = result != previous_text
        return current

    updated = store.update("annotation-tasks", task_id, finish)
    append_target_version(
        store,
        task.dataset_id,
        task.segment_id,
        version_label_for_task(task.type, task.round),
        result,
        author_user_id=user_id,
        timestamp=stamp,
    )
    return AnnotationTask.from_doc(updated)


def skip_task(
    store: DocumentStore,
    task_id: str,
    user_id: str,
    now: datetime,
    record_at: Optional[datetime] = None,
) -> AnnotationTask:
    """Return an assigned task to the pool, recording who skipped it."""
    _load_assigned_task(store, task_id, user_id, now)
    stamp = to_rfc3339(record_at or now)

    def release(current):
        live = AnnotationTask.from_doc(current)
        if live.status != STATUS_ASSIGNED or live.assignee != user_id:
            raise LeaseViolationError(f"task {task_id} is not assigned to {user_id}")
        current = dict(current)
        current["status"] = STATUS_UNASSIGNED
        current["assignee"] = None
        current["leaseExpiresAt"] = None
        current["assigneeVerifierLevel"] = None
        current["skips"] = list(current.get("skips", [])) + [{"userId": user_id, "at": stamp}]
        return current

    updated = store.update("annotation-tasks", task_id, release)
    return AnnotationTask.from_doc(updated)


def lease_period_remaining(task: AnnotationTask, now: datetime) -> Optional[timedelta]:
    if task.lease_expires_at is None:
        return None
    return parse_rfc3339(task.lease_expires_at) - now
