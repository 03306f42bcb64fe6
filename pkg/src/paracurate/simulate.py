"""End-to-end curation simulation with randomized annotator behavior.

Drives the manager passes against a store while simulated users complete,
edit, or skip their assigned tasks, with optional lease expiries injected by
jumping the clock.  Used by the acceptance suite and the demo scripts to
exercise the whole pipeline without human annotators.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from . import tasks as task_ops
from . import workflow as workflow_ops
from .config import SystemConfig
from .models import STATUS_ASSIGNED, TASK_TRANSLATION, AnnotationTask, WORKFLOW_ACTIVE
from .store import DocumentStore, get_segment


@dataclass
class SimulationBehavior:
    edit_probability: float = 0.4
    skip_probability: float = 0.05
    abandon_probability: float = 0.02
    pass_interval: timedelta = timedelta(minutes=10)
    max_passes: int = 500


@dataclass
class SimulationResult:
    passes: int = 0
    actions: int = 0
    assignments: int = 0
    completions: int = 0
    skips: int = 0
    revocations: int = 0
    completed_workflows: int = 0
    events: list[str] = field(default_factory=list)


def _translation_text(task: AnnotationTask, rng: random.Random) -> str:
    return f"trans[{task.dataset_id}/{task.segment_id}]-{rng.randrange(10_000)}"


def _edited_text(previous: str, rng: random.Random) -> str:
    mode = rng.randrange(3)
    if mode == 0:
        return previous + chr(ord("a") + rng.randrange(26))
    if mode == 1 and len(previous) > 1:
        cut = rng.randrange(len(previous))
        return previous[:cut] + previous[cut + 1 :]
    cut = rng.randrange(len(previous) + 1)
    return previous[:cut] + chr(ord("A") + rng.randrange(26)) + previous[cut:]


def run_simulation(
    store: DocumentStore,
    rng: random.Random,
    behavior: SimulationBehavior | None = None,
    config: SystemConfig | None = None,
    start: datetime | None = None,
) -> SimulationResult:
    """Run manager passes until every workflow completes (or passes run out)."""
    behavior = behavior or SimulationBehavior()
    config = config or SystemConfig()
    now = start or datetime(2024, 1, 1, tzinfo=timezone.utc)
    result = SimulationResult()

    for _ in range(behavior.max_passes):
        result.passes += 1
        result.revocations += task_ops.revoke_expired(store, now)
        result.actions += workflow_ops.advance_all(store)
        assigned = task_ops.assign_tasks(store, now, config)
        result.assignments += len(assigned)

        abandoned = 0
        for doc in store.list("annotation-tasks", {"status": STATUS_ASSIGNED}):
            task = AnnotationTask.from_doc(doc)
            user_id = task.assignee
            assert user_id is not None
            roll = rng.random()
            if roll < behavior.abandon_probability:
                abandoned += 1  # never submitted; the lease will expire
                continue
            if roll < behavior.abandon_probability + behavior.skip_probability:
                task_ops.skip_task(store, task.task_id, user_id, now)
                result.skips += 1
                continue
            if task.type == TASK_TRANSLATION:
                text = _translation_text(task, rng)
            else:
                segment = get_segment(store, task.dataset_id, task.segment_id)
                latest = segment.latest_version()
                assert latest is not None
                if rng.random() < behavior.edit_probability:
                    text = _edited_text(latest.text, rng)
                else:
                    text = latest.text
            task_ops.complete_task(store, task.task_id, user_id, text, now)
            result.completions += 1

        # Abandoned assignments expire: jump past the lease period so the
        # next revocation pass reclaims them.
        if abandoned:
            now += config.lease_period + timedelta(minutes=1)
        else:
            now += behavior.pass_interval

        if not store.list("workflows", {"status": WORKFLOW_ACTIVE}):
            break

    result.completed_workflows = len(
        store.list("workflows", {"status": "completed"})
    )
    return result
