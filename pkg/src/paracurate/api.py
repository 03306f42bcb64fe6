"""HTTP workspace service with replay-safe submission semantics.

Clients queue their work offline and replay it on reconnect; every envelope
carries a client-chosen operation id, and the service applies each id at
most once, so duplicated or re-sent batches converge to the same store
state as a single online run.  All responses carry explicit writing
directions for every text field they contain.
"""

from __future__ import annotations

import hashlib
import logging
import os
import secrets
import threading
from datetime import datetime
from typing import Any, Callable, Optional

from fastapi import Depends, FastAPI, Header, HTTPException
from pydantic import BaseModel

from . import tasks as task_ops
from . import workflow as workflow_ops
from .config import SystemConfig
from .errors import LeaseViolationError, NotFoundError
from .models import (
    STATUS_ASSIGNED,
    STATUS_COMPLETED,
    TASK_COPYEDIT,
    TASK_TRANSLATION,
    AnnotationTask,
    UserProfile,
    parse_rfc3339,
    to_rfc3339,
    utcnow,
)
from .store import (
    DEDUP,
    MANIFESTS,
    SESSIONS,
    ConflictError,
    DocumentStore,
    direction_map,
    get_segment,
    language_direction,
    open_store,
)

logger = logging.getLogger(__name__)

ACTION_SUBMIT = "submit"
ACTION_SKIP = "skip"

RESULT_APPLIED = "applied"
RESULT_DUPLICATE = "duplicate"
RESULT_LEASE_VIOLATION = "lease-violation"
RESULT_NOT_FOUND = "not-found"
RESULT_MALFORMED = "malformed"

_RESULT_STATUS = {
    RESULT_APPLIED: 200,
    RESULT_DUPLICATE: 200,
    RESULT_LEASE_VIOLATION: 409,
    RESULT_NOT_FOUND: 404,
    RESULT_MALFORMED: 400,
}


def hash_secret(secret: str) -> str:
    return hashlib.sha256(secret.encode("utf-8")).hexdigest()


class LoginRequest(BaseModel):
    userId: str
    secret: str


class SubmissionBatch(BaseModel):
    envelopes: list[dict[str, Any]]


def run_manager_pass(store: DocumentStore, config: SystemConfig, now: datetime) -> None:
    """One periodic manager cycle: reclaim leases, advance workflows, assign."""
    with store.advisory_lock("managers"):
        task_ops.revoke_expired(store, now)
        workflow_ops.advance_all(store)
        task_ops.assign_tasks(store, now, config)


def create_app(
    store: Optional[DocumentStore] = None,
    config: Optional[SystemConfig] = None,
    clock: Optional[Callable[[], datetime]] = None,
    token_factory: Optional[Callable[[], str]] = None,
    run_managers: Optional[bool] = None,
) -> FastAPI:
    """Build the service; store/clock/token injection keeps tests hermetic.

    With ``run_managers`` (or ``PARACURATE_RUN_MANAGERS=1``) a background
    thread executes the manager cycle every ``manager_period_seconds``.
    """
    if store is None:
        store = open_store(os.environ.get("PARACURATE_STORE", "memory:"))
    config = config or SystemConfig()
    clock = clock or utcnow
    token_factory = token_factory or (lambda: secrets.token_urlsafe(24))
    if run_managers is None:
        run_managers = os.environ.get("PARACURATE_RUN_MANAGERS", "") == "1"

    app = FastAPI(title="paracurate curation service")
    app.state.store = store
    app.state.config = config
    app.state.clock = clock
    app.state.token_factory = token_factory
    app.state.user_locks: dict[str, threading.Lock] = {}
    app.state.user_locks_guard = threading.Lock()
    app.state.manager_stop = threading.Event()

    if run_managers:
        def manager_loop() -> None:
            while not app.state.manager_stop.wait(config.manager_period_seconds):
                try:
                    run_manager_pass(store, config, clock())
                except Exception:  # noqa: BLE001 - the loop must survive a bad pass
                    logger.exception("manager pass failed")

        @app.on_event("startup")
        def start_managers() -> None:
            thread = threading.Thread(target=manager_loop, name="managers", daemon=True)
            app.state.manager_thread = thread
            thread.start()

        @app.on_event("shutdown")
        def stop_managers() -> None:
            app.state.manager_stop.set()

    def user_lock(user_id: str) -> threading.Lock:
        with app.state.user_locks_guard:
            return app.state.user_locks.setdefault(user_id, threading.Lock())

    def authenticate(authorization: Optional[str] = Header(default=None)) -> UserProfile:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(status_code=401, detail="missing bearer token")
        token = authorization.removeprefix("Bearer ").strip()
        session = store.get(SESSIONS, token)
        if session is None:
            raise HTTPException(status_code=401, detail="unknown token")
        if parse_rfc3339(session["expiresAt"]) < clock():
            store.delete(SESSIONS, token)
            raise HTTPException(status_code=401, detail="token expired")
        user_doc = store.get("users", session["userId"])
        if user_doc is None:
            raise HTTPException(status_code=401, detail="user no longer exists")
        return UserProfile.from_doc(user_doc)

    @app.get("/v1/ping")
    def ping() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/v1/auth/login")
    def login(request: LoginRequest) -> dict[str, str]:
        user_doc = store.get("users", request.userId)
        if user_doc is None or user_doc.get("secretHash") != hash_secret(request.secret):
            raise HTTPException(status_code=401, detail="bad credentials")
        token = token_factory()
        expires = to_rfc3339(clock() + config.token_ttl)
        store.insert(SESSIONS, token, {"userId": request.userId, "expiresAt": expires})
        return {"token": token, "expiresAt": expires}

    @app.post("/v1/auth/logout")
    def logout(authorization: Optional[str] = Header(default=None)) -> dict[str, str]:
        if authorization and authorization.startswith("Bearer "):
            store.delete(SESSIONS, authorization.removeprefix("Bearer ").strip())
        return {"status": "ok"}

    @app.get("/v1/config/languages")
    def languages() -> dict[str, Any]:
        doc = store.get("config", "languages")
        rtl = sorted(doc.get("rtl", [])) if doc else []
        return {"rtl": rtl, "default": "ltr"}

    @app.get("/v1/config/languages/{tag}")
    def language(tag: str) -> dict[str, str]:
        try:
            return {"code": tag, "direction": language_direction(store, tag)}
        except Exception as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.get("/v1/me/workspace")
    def workspace(user: UserProfile = Depends(authenticate)) -> dict[str, Any]:
        return build_workspace_view(store, user)

    @app.post("/v1/submissions")
    def submissions(
        batch: SubmissionBatch, user: UserProfile = Depends(authenticate)
    ) -> dict[str, Any]:
        with user_lock(user.user_id):
            results = apply_submission_batch(store, user, batch.envelopes, clock)
        return {"results": results}

    return app


def build_workspace_view(store: DocumentStore, user: UserProfile) -> dict[str, Any]:
    """Assigned tasks with preferred-language source panes and copyedit seeds."""
    priorities = {d["workflowId"]: d["priority"] for d in store.list("workflows")}
    assigned = [
        AnnotationTask.from_doc(d)
        for d in store.list(
            "annotation-tasks", {"status": STATUS_ASSIGNED, "assignee": user.user_id}
        )
    ]
    assigned.sort(key=lambda t: (priorities.get(t.workflow_id, 0), t.round, t.task_id))

    tags_seen: set[str] = {user.ui_language}
    items = []
    for task in assigned:
        segment = get_segment(store, task.dataset_id, task.segment_id)
        sources = []
        for tag in user.preferred_source_languages:
            if tag in segment.sources:
                sources.append(
                    {
                        "language": tag,
                        "direction": language_direction(store, tag),
                        "text": segment.sources[tag],
                    }
                )
                tags_seen.add(tag)
        target_tag = _target_language(store, task.dataset_id)
        if target_tag:
            tags_seen.add(target_tag)
        item: dict[str, Any] = {
            "task": {
                "taskId": task.task_id,
                "workflowId": task.workflow_id,
                "datasetId": task.dataset_id,
                "segmentId": task.segment_id,
                "type": task.type,
                "round": task.round,
                "leaseExpiresAt": task.lease_expires_at,
            },
            "sources": sources,
            "targetLanguage": {
                "code": target_tag,
                "direction": language_direction(store, target_tag) if target_tag else "ltr",
            },
            "seedText": None,
            "seedVersionLabel": None,
        }
        if task.type == TASK_COPYEDIT:
            latest = segment.latest_version()
            if latest is not None:
                item["seedText"] = latest.text
                item["seedVersionLabel"] = latest.label
        items.append(item)

    counters = {
        TASK_TRANSLATION: {"open": 0, "completed": 0},
        TASK_COPYEDIT: {"open": 0, "completed": 0},
    }
    for task in assigned:
        counters[task.type]["open"] += 1
    for doc in store.list(
        "annotation-tasks", {"status": STATUS_COMPLETED, "completedBy": user.user_id}
    ):
        counters[doc["type"]]["completed"] += 1

    return {
        "userId": user.user_id,
        "uiLanguage": user.ui_language,
        "tasks": items,
        "counters": counters,
        "languageDirections": direction_map(store, sorted(tags_seen)),
    }


def _target_language(store: DocumentStore, dataset_id: str) -> Optional[str]:
    manifest = store.get(MANIFESTS, dataset_id)
    return manifest["targetLanguage"] if manifest else None


def _validate_envelope(raw: dict[str, Any]) -> Optional[str]:
    """Return an error string for a malformed envelope, or None when valid."""
    if not isinstance(raw.get("clientOpId"), str) or not raw["clientOpId"]:
        return "clientOpId is required"
    if not isinstance(raw.get("taskId"), str) or not raw["taskId"]:
        return "taskId is required"
    action = raw.get("action")
    if action not in (ACTION_SUBMIT, ACTION_SKIP):
        return f"action must be {ACTION_SUBMIT!r} or {ACTION_SKIP!r}"
    if action == ACTION_SUBMIT and not isinstance(raw.get("text"), str):
        return "submit envelopes carry a text field"
    stamp = raw.get("clientTimestamp")
    if not isinstance(stamp, str):
        return "clientTimestamp is required"
    try:
        parse_rfc3339(stamp)
    except ValueError:
        return f"clientTimestamp is not RFC 3339: {stamp!r}"
    return None


def apply_submission_batch(
    store: DocumentStore,
    user: UserProfile,
    envelopes: list[dict[str, Any]],
    clock: Callable[[], datetime],
) -> list[dict[str, Any]]:
    """Apply envelopes in client-timestamp order with exactly-once effects.

    Every well-formed envelope's operation id is recorded after processing,
    whatever its outcome, so a replay returns ``duplicate`` and changes
    nothing.  A lease violation or unknown task fails that envelope alone.
    """
    indexed = list(enumerate(envelopes))
    wellformed = []
    results: dict[int, dict[str, Any]] = {}
    for index, raw in indexed:
        error = _validate_envelope(raw if isinstance(raw, dict) else {})
        if error is not None:
            results[index] = {
                "clientOpId": raw.get("clientOpId") if isinstance(raw, dict) else None,
                "result": RESULT_MALFORMED,
                "status": 400,
                "detail": error,
            }
        else:
            wellformed.append((index, raw))
    wellformed.sort(key=lambda pair: (parse_rfc3339(pair[1]["clientTimestamp"]), pair[0]))

    for index, raw in wellformed:
        op_id = raw["clientOpId"]
        if _op_seen(store, user.user_id, op_id):
            outcome = RESULT_DUPLICATE
        else:
            outcome = _apply_envelope(store, user, raw, clock)
            _record_op(store, user.user_id, op_id)
        results[index] = {
            "clientOpId": op_id,
            "result": outcome,
            "status": _RESULT_STATUS[outcome],
        }
    return [results[index] for index, _ in indexed]


def _apply_envelope(
    store: DocumentStore,
    user: UserProfile,
    raw: dict[str, Any],
    clock: Callable[[], datetime],
) -> str:
    # Lease validity is judged at arrival time, but the stored stamps come
    # from the client's timestamp: the store then depends only on the
    # deduplicated action sequence, never on delivery timing.
    now = clock()
    record_at = parse_rfc3339(raw["clientTimestamp"])
    try:
        if raw["action"] == ACTION_SUBMIT:
            task_ops.complete_task(
                store, raw["taskId"], user.user_id, raw["text"], now, record_at=record_at
            )
        else:
            task_ops.skip_task(store, raw["taskId"], user.user_id, now, record_at=record_at)
    except LeaseViolationError:
        return RESULT_LEASE_VIOLATION
    except NotFoundError:
        return RESULT_NOT_FOUND
    return RESULT_APPLIED


def _op_seen(store: DocumentStore, user_id: str, op_id: str) -> bool:
    doc = store.get(DEDUP, user_id)
    return bool(doc) and op_id in doc.get("seenOpIds", [])


def _record_op(store: DocumentStore, user_id: str, op_id: str) -> None:
    if store.get(DEDUP, user_id) is None:
        try:
            store.insert(DEDUP, user_id, {"userId": user_id, "seenOpIds": []})
        except ConflictError:
            pass

    def mutate(doc: dict[str, Any]) -> Optional[dict[str, Any]]:
        seen = list(doc.get("seenOpIds", []))
        if op_id in seen:
            return None
        doc = dict(doc)
        doc["seenOpIds"] = seen + [op_id]
        return doc

    store.update(DEDUP, user_id, mutate)


app = create_app()
