"""Operator-level dataset and reporting operations behind the CLI.

Imports are atomic per dataset (validated before anything is written),
exports are deterministic (byte-identical on re-run), and every count the
reports emit reconciles with a raw scan of the collections.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .errors import ConflictError, FormatError, NotFoundError, PreconditionError
from .models import (
    STATUS_COMPLETED,
    VERSION_LABELS,
    WORKFLOW_ACTIVE,
    DatasetManifest,
    MultilingualSegment,
    UserProfile,
    Workflow,
    parse_rfc3339,
    validate_language_tag,
    workflow_doc_id,
)
from .store import (
    MANIFESTS,
    DocumentStore,
    corpus_file_name,
    put_segment,
    read_corpus_file,
    write_corpus_file,
)

SEGMENT_ID_WIDTH = 6


def segment_id_for_line(index: int) -> str:
    """Zero-padded position id so lexicographic order equals file order."""
    return f"{index:0{SEGMENT_ID_WIDTH}d}"


def get_manifest(store: DocumentStore, dataset_id: str) -> DatasetManifest:
    doc = store.get(MANIFESTS, dataset_id)
    if doc is None:
        raise NotFoundError(f"dataset {dataset_id!r} is not imported")
    return DatasetManifest.from_doc(doc)


def load_dataset(
    store: DocumentStore,
    path: str | Path,
    dataset_id: str,
    language_tags: Sequence[str],
    target_language: str,
    split: Optional[str] = None,
    replace: bool = False,
) -> int:
    """Import one line-parallel text file per language tag; returns segments.

    Files live at ``<path>/<tag>[.<split>]``.  Line counts must agree across
    languages or nothing is imported.  Re-importing an existing dataset is a
    conflict unless ``replace`` is set.
    """
    validate_language_tag(target_language)
    for tag in language_tags:
        validate_language_tag(tag)
    if not language_tags:
        raise FormatError("at least one language tag is required")

    base = Path(path)
    columns: dict[str, list[str]] = {}
    for tag in language_tags:
        file_path = base / corpus_file_name(tag, split)
        columns[tag] = read_corpus_file(file_path)
    counts = {tag: len(lines) for tag, lines in columns.items()}
    if len(set(counts.values())) > 1:
        raise FormatError(f"line counts differ across language files: {counts}")
    line_count = next(iter(counts.values()))

    existing = store.get(MANIFESTS, dataset_id)
    has_segments = bool(store.list("datasets", {"datasetId": dataset_id}))
    if existing is not None or has_segments:
        if not replace:
            raise ConflictError(f"dataset {dataset_id!r} is already imported (use --replace)")
        _purge_dataset(store, dataset_id)

    with store.advisory_lock(f"dataset:{dataset_id}"):
        for index in range(line_count):
            segment = MultilingualSegment(
                dataset_id=dataset_id,
                segment_id=segment_id_for_line(index),
                sources={tag: columns[tag][index] for tag in language_tags},
            )
            put_segment(store, segment)
        manifest = DatasetManifest(
            dataset_id=dataset_id,
            language_tags=list(language_tags),
            segment_count=line_count,
            target_language=target_language,
            split=split,
        )
        try:
            store.insert(MANIFESTS, dataset_id, manifest.to_doc())
        except ConflictError:
            store.update(MANIFESTS, dataset_id, lambda _doc: manifest.to_doc())
    return line_count


def _purge_dataset(store: DocumentStore, dataset_id: str) -> None:
    for doc in store.list("datasets", {"datasetId": dataset_id}):
        store.delete("datasets", f"{dataset_id}/{doc['segmentId']}")
    for doc in store.list("workflows", {"datasetId": dataset_id}):
        store.delete("workflows", doc["workflowId"])
    for doc in store.list("annotation-tasks", {"datasetId": dataset_id}):
        store.delete("annotation-tasks", doc["taskId"])
    store.delete(MANIFESTS, dataset_id)


def create_workflows(store: DocumentStore, dataset_id: str, priority_start: int = 0) -> int:
    """One active workflow per segment, priorities ascending in segment order."""
    get_manifest(store, dataset_id)
    if store.list("workflows", {"datasetId": dataset_id}):
        raise ConflictError(f"workflows already exist for dataset {dataset_id!r}")
    segments = store.list("datasets", {"datasetId": dataset_id})
    created = 0
    with store.advisory_lock(f"dataset:{dataset_id}"):
        for offset, doc in enumerate(segments):
            workflow = Workflow(
                workflow_id=workflow_doc_id(dataset_id, doc["segmentId"]),
                dataset_id=dataset_id,
                segment_id=doc["segmentId"],
                priority=priority_start + offset,
                status=WORKFLOW_ACTIVE,
            )
            try:
                store.insert("workflows", workflow.workflow_id, workflow.to_doc())
            except ConflictError as exc:
                raise ConflictError(
                    f"workflow already exists for segment {workflow.workflow_id}"
                ) from exc
            created += 1
    return created


def system_report(store: DocumentStore) -> dict[str, dict[str, dict[str, int]]]:
    """Workflow and task counts by status by dataset (read-only)."""
    report: dict[str, dict[str, dict[str, int]]] = {}

    def bucket(dataset_id: str) -> dict[str, dict[str, int]]:
        return report.setdefault(dataset_id, {"workflows": {}, "tasks": {}})

    for doc in store.list("workflows"):
        counts = bucket(doc["datasetId"])["workflows"]
        counts[doc["status"]] = counts.get(doc["status"], 0) + 1
    for doc in store.list("annotation-tasks"):
        counts = bucket(doc["datasetId"])["tasks"]
        counts[doc["status"]] = counts.get(doc["status"], 0) + 1
    return report


def export_dataset(
    store: DocumentStore,
    dataset_id: str,
    out_dir: str | Path,
    with_edits: bool = True,
    partial: bool = False,
) -> list[Path]:
    """Write source files, the final target file, and v1..v4 round logs.

    All files are line-parallel with the segment order.  Segments that
    finished without a third round repeat their settled text in the later
    version files, keeping every log line-parallel with the final file.
    Requires every workflow to be completed unless ``partial``.
    """
    manifest = get_manifest(store, dataset_id)
    active = store.list("workflows", {"datasetId": dataset_id, "status": WORKFLOW_ACTIVE})
    if active and not partial:
        raise PreconditionError(
            f"dataset {dataset_id!r} still has {len(active)} active workflows (use --partial)"
        )

    segments = [
        MultilingualSegment.from_doc(d)
        for d in store.list("datasets", {"datasetId": dataset_id})
    ]
    out_base = Path(out_dir) / dataset_id
    written: list[Path] = []

    for tag in sorted(manifest.language_tags):
        path = out_base / corpus_file_name(tag, manifest.split)
        write_corpus_file(path, [s.sources.get(tag, "") for s in segments])
        written.append(path)

    final_lines = []
    version_lines: dict[str, list[str]] = {label: [] for label in VERSION_LABELS}
    for segment in segments:
        texts = [v.text for v in segment.target_versions]
        final_lines.append(texts[-1] if texts else "")
        for index, label in enumerate(VERSION_LABELS):
            if index < len(texts):
                version_lines[label].append(texts[index])
            else:
                version_lines[label].append(texts[-1] if texts else "")

    final_path = out_base / corpus_file_name(manifest.target_language, manifest.split)
    write_corpus_file(final_path, final_lines)
    written.append(final_path)

    if with_edits:
        for label in VERSION_LABELS:
            path = out_base / corpus_file_name(manifest.target_language, manifest.split, label)
            write_corpus_file(path, version_lines[label])
            written.append(path)
    return written


@dataclass(frozen=True)
class AccountingRow:
    user_id: str
    dataset_id: str
    month: str  # YYYY-MM
    task_type: str
    completed_count: int


def accounting_statements(
    store: DocumentStore,
    from_month: Optional[str] = None,
    to_month: Optional[str] = None,
) -> list[AccountingRow]:
    """Completed tasks by user by dataset by month (UTC month attribution)."""
    for bound in (from_month, to_month):
        if bound is not None and not _valid_month(bound):
            raise FormatError(f"month bounds use YYYY-MM, got {bound!r}")
    tallies: dict[tuple[str, str, str, str], int] = {}
    for doc in store.list("annotation-tasks", {"status": STATUS_COMPLETED}):
        completed_at = doc.get("completedAt")
        completer = doc.get("completedBy")
        if not completed_at or not completer:
            continue
        month = parse_rfc3339(completed_at).strftime("%Y-%m")
        if from_month and month < from_month:
            continue
        if to_month and month > to_month:
            continue
        key = (month, doc["datasetId"], completer, doc["type"])
        tallies[key] = tallies.get(key, 0) + 1
    return [
        AccountingRow(user_id=u, dataset_id=d, month=m, task_type=t, completed_count=n)
        for (m, d, u, t), n in sorted(tallies.items())
    ]


def _valid_month(value: str) -> bool:
    if len(value) != 7 or value[4] != "-":
        return False
    year, month = value[:4], value[5:]
    return year.isdigit() and month.isdigit() and 1 <= int(month) <= 12


def accounting_csv(rows: Sequence[AccountingRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["user_id", "dataset_id", "month", "task_type", "completed_count"])
    for row in rows:
        writer.writerow([row.user_id, row.dataset_id, row.month, row.task_type, row.completed_count])
    return buffer.getvalue()


def add_user(store: DocumentStore, profile: UserProfile) -> None:
    profile.validate()
    try:
        store.insert("users", profile.user_id, profile.to_doc())
    except ConflictError as exc:
        raise ConflictError(f"user {profile.user_id!r} already exists") from exc
