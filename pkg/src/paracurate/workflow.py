"""Per-segment workflow rules.

Every segment is translated once and then copyedited two or three times:
rounds 1 and 2 always run, and round 3 runs only when round 1 or round 2
changed the text.  The engine inspects a workflow's tasks, creates the next
task when one is due, and completes the workflow when nothing is left.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import IntegrityError
from .models import (
    STATUS_COMPLETED,
    TASK_COPYEDIT,
    TASK_TRANSLATION,
    WORKFLOW_ACTIVE,
    WORKFLOW_COMPLETED,
    AnnotationTask,
    Workflow,
    task_doc_id,
)
from .store import ConflictError, DocumentStore

logger = logging.getLogger(__name__)

ACTION_CREATE_TASK = "createTask"
ACTION_COMPLETE = "complete"
ACTION_NOOP = "noop"


@dataclass(frozen=True)
class WorkflowRuleOutcome:
    action: str
    task_to_create: Optional[tuple[str, int]] = None

    def __post_init__(self) -> None:
        if (self.action == ACTION_CREATE_TASK) != (self.task_to_create is not None):
            raise ValueError("task_to_create is present exactly for createTask outcomes")


def next_action(workflow: Workflow, tasks: Sequence[AnnotationTask]) -> WorkflowRuleOutcome:
    """Decide the next step for a workflow from its tasks (pure function).

    ``tasks`` holds every task of the workflow; the completed subset,
    ordered by round, drives the rules.  Any uncompleted task means there is
    nothing to do yet.
    """
    if workflow.status == WORKFLOW_COMPLETED:
        return WorkflowRuleOutcome(ACTION_NOOP)
    if any(t.status != STATUS_COMPLETED for t in tasks):
        return WorkflowRuleOutcome(ACTION_NOOP)

    completed = sorted((t for t in tasks if t.status == STATUS_COMPLETED), key=lambda t: t.round)
    _check_history(workflow, completed)

    if not completed:
        return WorkflowRuleOutcome(ACTION_CREATE_TASK, (TASK_TRANSLATION, 0))

    rounds = {t.round for t in completed if t.type == TASK_COPYEDIT}
    if not rounds:
        return WorkflowRuleOutcome(ACTION_CREATE_TASK, (TASK_COPYEDIT, 1))
    if rounds == {1}:
        return WorkflowRuleOutcome(ACTION_CREATE_TASK, (TASK_COPYEDIT, 2))
    if rounds == {1, 2}:
        if _edit_occurred(completed, (1, 2)):
            return WorkflowRuleOutcome(ACTION_CREATE_TASK, (TASK_COPYEDIT, 3))
        return WorkflowRuleOutcome(ACTION_COMPLETE)
    # rounds == {1, 2, 3}
    return WorkflowRuleOutcome(ACTION_COMPLETE)


def _edit_occurred(completed: Sequence[AnnotationTask], rounds: Iterable[int]) -> bool:
    wanted = set(rounds)
    for task in completed:
        if task.type == TASK_COPYEDIT and task.round in wanted:
            if task.edited_flag is None:
                raise IntegrityError(
                    f"completed copyedit {task.task_id} is missing its edited flag"
                )
            if task.edited_flag:
                return True
    return False


def _check_history(workflow: Workflow, completed: Sequence[AnnotationTask]) -> None:
    translations = [t for t in completed if t.type == TASK_TRANSLATION]
    copyedits = [t for t in completed if t.type == TASK_COPYEDIT]
    if len(translations) > 1:
        raise IntegrityError(f"workflow {workflow.workflow_id} has {len(translations)} translations")
    rounds = sorted(t.round for t in copyedits)
    if len(set(rounds)) != len(rounds):
        raise IntegrityError(f"workflow {workflow.workflow_id} repeats a copyedit round")
    if rounds and not translations:
        raise IntegrityError(f"workflow {workflow.workflow_id} has copyedits but no translation")
    if rounds != list(range(1, len(rounds) + 1)):
        raise IntegrityError(
            f"workflow {workflow.workflow_id} has a copyedit round gap: {rounds}"
        )


def advance_workflow(
    store: DocumentStore,
    workflow: Workflow,
    tasks: Optional[Sequence[AnnotationTask]] = None,
) -> Optional[str]:
    """Apply next_action to one workflow; returns the action taken (or None).

    Task creation uses a deterministic task id, so losing a race to another
    pass degrades to a no-op instead of a duplicate task.
    """
    if tasks is None:
        tasks = [
            AnnotationTask.from_doc(d)
            for d in store.list("annotation-tasks", {"workflowId": workflow.workflow_id})
        ]
    outcome = next_action(workflow, tasks)
    if outcome.action == ACTION_NOOP:
        return None
    if outcome.action == ACTION_COMPLETE:
        changed = False

        def complete(doc):
            nonlocal changed
            if doc["status"] == WORKFLOW_COMPLETED:
                changed = False
                return None
            changed = True
            doc = dict(doc)
            doc["status"] = WORKFLOW_COMPLETED
            return doc

        store.update("workflows", workflow.workflow_id, complete)
        return ACTION_COMPLETE if changed else None

    task_type, round_ = outcome.task_to_create
    task = AnnotationTask(
        task_id=task_doc_id(workflow.workflow_id, task_type, round_),
        workflow_id=workflow.workflow_id,
        dataset_id=workflow.dataset_id,
        segment_id=workflow.segment_id,
        type=task_type,
        round=round_,
    )
    try:
        store.insert("annotation-tasks", task.task_id, task.to_doc())
    except ConflictError:
        return None
    return ACTION_CREATE_TASK


def advance_all(store: DocumentStore) -> int:
    """Run one pass over all active workflows in ascending priority order.

    Idempotent: a second immediate pass with no intervening completions
    takes zero actions.  Failures on one workflow do not block the rest.
    """
    workflows = [
        Workflow.from_doc(d) for d in store.list("workflows", {"status": WORKFLOW_ACTIVE})
    ]
    workflows.sort(key=lambda w: (w.priority, w.workflow_id))

    # One scan for all tasks; per-workflow re-listing would make every pass
    # quadratic in the corpus size.
    by_workflow: dict[str, list[AnnotationTask]] = {}
    for doc in store.list("annotation-tasks"):
        task = AnnotationTask.from_doc(doc)
        by_workflow.setdefault(task.workflow_id, []).append(task)

    actions = 0
    for workflow in workflows:
        try:
            tasks = by_workflow.get(workflow.workflow_id, [])
            if advance_workflow(store, workflow, tasks) is not None:
                actions += 1
        except Exception:  # noqa: BLE001 - per-workflow isolation
            logger.exception("advance failed for workflow %s", workflow.workflow_id)
    return actions
