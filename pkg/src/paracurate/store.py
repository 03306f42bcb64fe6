"""Document persistence for the five curation collections.

The backend is a pluggable key-value document store whose only required
atomicity unit is a per-document compare-and-swap keyed on an integer
revision.  Two backends ship here: a thread-safe in-memory store (tests,
simulations) and a file-backed store (one JSON file per document, atomic
rename writes, cross-process locking via ``filelock``).

Public collections: ``datasets``, ``workflows``, ``annotation-tasks``,
``users``, ``config``.  A few internal collections (manifests, sessions,
submission dedup sets) share the same machinery but are not exposed
through :func:`list_collection`.
"""

from __future__ import annotations

import json
import threading
import urllib.parse
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Optional

from filelock import FileLock

from .errors import ConflictError, NotFoundError
from .models import (
    DIRECTION_LTR,
    DIRECTION_RTL,
    MultilingualSegment,
    next_version_label,
    nfc,
    segment_doc_id,
    to_rfc3339,
    utcnow,
    validate_language_tag,
)

COLLECTIONS = ("datasets", "workflows", "annotation-tasks", "users", "config")

# Internal collections, reachable through the store API but not listable
# through the public list_collection surface.
MANIFESTS = "manifests"
SESSIONS = "sessions"
DEDUP = "submission-dedup"

LANGUAGES_DOC_ID = "languages"

REV_KEY = "_rev"

_CAS_RETRIES = 32


class DocumentStore(ABC):
    """Keyed JSON documents with per-document compare-and-swap."""

    @abstractmethod
    def get(self, collection: str, doc_id: str) -> Optional[dict[str, Any]]:
        """Return a copy of the document (with its ``_rev``) or None."""

    @abstractmethod
    def insert(self, collection: str, doc_id: str, doc: Mapping[str, Any]) -> dict[str, Any]:
        """Create a document; raises ConflictError if the id already exists."""

    @abstractmethod
    def replace(
        self, collection: str, doc_id: str, doc: Mapping[str, Any], expected_rev: int
    ) -> dict[str, Any]:
        """Swap the document iff its stored revision equals ``expected_rev``."""

    @abstractmethod
    def delete(self, collection: str, doc_id: str) -> bool:
        """Remove a document; returns False when it was absent."""

    @abstractmethod
    def doc_ids(self, collection: str) -> list[str]:
        """All document ids in the collection, lexicographically sorted."""

    @abstractmethod
    def advisory_lock(self, name: str):
        """Coarse named lock used to serialize CLI mutations against managers."""

    def list(
        self,
        collection: str,
        where: Mapping[str, Any] | Callable[[dict[str, Any]], bool] | None = None,
    ) -> list[dict[str, Any]]:
        """Matching documents in lexicographic doc-id order (deterministic)."""
        predicate = _as_predicate(where)
        out = []
        for doc_id in self.doc_ids(collection):
            doc = self.get(collection, doc_id)
            if doc is not None and predicate(doc):
                out.append(doc)
        return out

    def update(
        self,
        collection: str,
        doc_id: str,
        mutate: Callable[[dict[str, Any]], dict[str, Any] | None],
    ) -> dict[str, Any]:
        """Read-modify-write with CAS retry.

        ``mutate`` receives a copy of the document without its revision and
        returns the replacement (or None to keep it unchanged).  Exceptions
        from ``mutate`` propagate untouched so callers can enforce their own
        preconditions atomically.
        """
        for _ in range(_CAS_RETRIES):
            current = self.get(collection, doc_id)
            if current is None:
                raise NotFoundError(f"{collection}/{doc_id} does not exist")
            rev = current.pop(REV_KEY)
            replacement = mutate(current)
            if replacement is None:
                current[REV_KEY] = rev
                return current
            try:
                return self.replace(collection, doc_id, replacement, expected_rev=rev)
            except ConflictError:
                continue
        raise ConflictError(f"update of {collection}/{doc_id} kept losing CAS races")


def _as_predicate(
    where: Mapping[str, Any] | Callable[[dict[str, Any]], bool] | None,
) -> Callable[[dict[str, Any]], bool]:
    if where is None:
        return lambda _doc: True
    if callable(where):
        return where
    fields = dict(where)
    return lambda doc: all(doc.get(k) == v for k, v in fields.items())


class MemoryStore(DocumentStore):
    """In-memory backend; safe for concurrent readers and writers."""

    def __init__(self) -> None:
        self._lock = threading.RLock()
        self._data: dict[str, dict[str, dict[str, Any]]] = {}
        self._revs: dict[str, dict[str, int]] = {}
        self._advisory: dict[str, threading.RLock] = {}

    def get(self, collection, doc_id):
        with self._lock:
            doc = self._data.get(collection, {}).get(doc_id)
            if doc is None:
                return None
            out = _copy_json(doc)
            out[REV_KEY] = self._revs[collection][doc_id]
            return out

    def insert(self, collection, doc_id, doc):
        with self._lock:
            bucket = self._data.setdefault(collection, {})
            if doc_id in bucket:
                raise ConflictError(f"{collection}/{doc_id} already exists")
            bucket[doc_id] = _strip_rev(doc)
            self._revs.setdefault(collection, {})[doc_id] = 1
        return self.get(collection, doc_id)

    def replace(self, collection, doc_id, doc, expected_rev):
        with self._lock:
            bucket = self._data.get(collection, {})
            if doc_id not in bucket:
                raise NotFoundError(f"{collection}/{doc_id} does not exist")
            current_rev = self._revs[collection][doc_id]
            if current_rev != expected_rev:
                raise ConflictError(
                    f"{collection}/{doc_id}: expected rev {expected_rev}, found {current_rev}"
                )
            bucket[doc_id] = _strip_rev(doc)
            self._revs[collection][doc_id] = current_rev + 1
        return self.get(collection, doc_id)

    def delete(self, collection, doc_id):
        with self._lock:
            bucket = self._data.get(collection, {})
            if doc_id not in bucket:
                return False
            del bucket[doc_id]
            del self._revs[collection][doc_id]
            return True

    def doc_ids(self, collection):
        with self._lock:
            return sorted(self._data.get(collection, {}))

    def advisory_lock(self, name):
        with self._lock:
            return self._advisory.setdefault(name, threading.RLock())


class FileStore(DocumentStore):
    """File-backed backend: ``<root>/collections/<name>/<quoted-id>.json``.

    Writes go through a temp file plus ``os.replace`` so readers never see a
    torn document; the compare-and-swap section is guarded by a store-wide
    file lock so concurrent processes serialize on revisions.
    """

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        (self.root / "collections").mkdir(parents=True, exist_ok=True)
        (self.root / "locks").mkdir(parents=True, exist_ok=True)
        self._write_lock = FileLock(str(self.root / "locks" / "store.lock"))

    def _doc_path(self, collection: str, doc_id: str) -> Path:
        cdir = self.root / "collections" / urllib.parse.quote(collection, safe="")
        return cdir / (urllib.parse.quote(doc_id, safe="") + ".json")

    def _read(self, path: Path) -> Optional[dict[str, Any]]:
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            return None
        doc = raw["doc"]
        doc[REV_KEY] = raw["rev"]
        return doc

    def _write(self, path: Path, doc: Mapping[str, Any], rev: int) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps({"rev": rev, "doc": _strip_rev(doc)}, ensure_ascii=False, sort_keys=True)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(payload, encoding="utf-8")
        tmp.replace(path)

    def get(self, collection, doc_id):
        return self._read(self._doc_path(collection, doc_id))

    def insert(self, collection, doc_id, doc):
        path = self._doc_path(collection, doc_id)
        with self._write_lock:
            if path.exists():
                raise ConflictError(f"{collection}/{doc_id} already exists")
            self._write(path, doc, rev=1)
        return self.get(collection, doc_id)

    def replace(self, collection, doc_id, doc, expected_rev):
        path = self._doc_path(collection, doc_id)
        with self._write_lock:
            current = self._read(path)
            if current is None:
                raise NotFoundError(f"{collection}/{doc_id} does not exist")
            if current[REV_KEY] != expected_rev:
                raise ConflictError(
                    f"{collection}/{doc_id}: expected rev {expected_rev}, found {current[REV_KEY]}"
                )
            self._write(path, doc, rev=expected_rev + 1)
        return self.get(collection, doc_id)

    def delete(self, collection, doc_id):
        path = self._doc_path(collection, doc_id)
        with self._write_lock:
            if not path.exists():
                return False
            path.unlink()
            return True

    def doc_ids(self, collection):
        cdir = self.root / "collections" / urllib.parse.quote(collection, safe="")
        if not cdir.is_dir():
            return []
        ids = [
            urllib.parse.unquote(p.name[: -len(".json")])
            for p in cdir.iterdir()
            if p.name.endswith(".json")
        ]
        return sorted(ids)

    def advisory_lock(self, name):
        safe = urllib.parse.quote(name, safe="")
        return FileLock(str(self.root / "locks" / f"{safe}.lock"))


def _copy_json(value: Any) -> Any:
    """Deep copy for JSON-shaped values; much cheaper than copy.deepcopy."""
    if isinstance(value, dict):
        return {k: _copy_json(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_copy_json(v) for v in value]
    return value


def _strip_rev(doc: Mapping[str, Any]) -> dict[str, Any]:
    out = _copy_json(dict(doc))
    out.pop(REV_KEY, None)
    return out


def open_store(location: str | Path) -> DocumentStore:
    """Open a store from a ``--store`` value: ``memory:`` or a directory path."""
    text = str(location)
    if text.startswith("memory:"):
        return MemoryStore()
    return FileStore(text)


# ---------------------------------------------------------------------------
# Collection-level operations


def list_collection(
    store: DocumentStore,
    name: str,
    where: Mapping[str, Any] | Callable[[dict[str, Any]], bool] | None = None,
) -> list[dict[str, Any]]:
    """List one of the five public collections, deterministically ordered."""
    if name not in COLLECTIONS:
        raise NotFoundError(f"unknown collection: {name!r}")
    return store.list(name, where)


def put_segment(store: DocumentStore, segment: MultilingualSegment) -> str:
    """Store a segment; re-putting an identical document is a no-op.

    Any divergence from the already-stored document (sources or versions) is
    a conflict: source texts are frozen after import and target versions only
    grow through :func:`append_target_version`.
    """
    segment = segment.normalized()
    segment.validate()
    doc_id = segment.doc_id
    doc = segment.to_doc()
    try:
        store.insert("datasets", doc_id, doc)
    except ConflictError:
        existing = store.get("datasets", doc_id)
        assert existing is not None
        if _strip_rev(existing) != doc:
            raise ConflictError(f"segment {doc_id} already exists with different content")
    return doc_id


def get_segment(store: DocumentStore, dataset_id: str, segment_id: str) -> MultilingualSegment:
    doc = store.get("datasets", segment_doc_id(dataset_id, segment_id))
    if doc is None:
        raise NotFoundError(f"segment {dataset_id}/{segment_id} does not exist")
    return MultilingualSegment.from_doc(doc)


def append_target_version(
    store: DocumentStore,
    dataset_id: str,
    segment_id: str,
    version_label: str,
    text: str,
    author_user_id: str,
    timestamp: Optional[str] = None,
) -> MultilingualSegment:
    """Append the next target version (v1..v4, strictly in order)."""
    from .errors import ProtocolError  # local import to keep module top light

    if store.get("users", author_user_id) is None:
        raise NotFoundError(f"author {author_user_id!r} is not a registered user")
    stamp = timestamp or to_rfc3339(utcnow())

    def mutate(doc: dict[str, Any]) -> dict[str, Any]:
        segment = MultilingualSegment.from_doc(doc)
        expected = next_version_label(segment)
        if expected is None:
            raise ProtocolError(f"segment {dataset_id}/{segment_id} already holds v4")
        if version_label != expected:
            raise ProtocolError(
                f"expected version {expected} for {dataset_id}/{segment_id}, got {version_label}"
            )
        doc = dict(doc)
        doc["targetVersions"] = doc.get("targetVersions", []) + [
            {
                "label": version_label,
                "text": nfc(text),
                "authorUserId": author_user_id,
                "timestamp": stamp,
            }
        ]
        return doc

    updated = store.update("datasets", segment_doc_id(dataset_id, segment_id), mutate)
    return MultilingualSegment.from_doc(updated)


def language_direction(store: DocumentStore, code: str) -> str:
    """Resolve a tag's writing direction; LTR unless config marks it RTL."""
    validate_language_tag(code)
    doc = store.get("config", LANGUAGES_DOC_ID)
    if doc and code in doc.get("rtl", []):
        return DIRECTION_RTL
    return DIRECTION_LTR


def set_language_direction(store: DocumentStore, code: str, direction: str) -> None:
    validate_language_tag(code)
    if direction not in (DIRECTION_LTR, DIRECTION_RTL):
        raise ValueError(f"direction must be ltr or rtl, got {direction!r}")
    if store.get("config", LANGUAGES_DOC_ID) is None:
        try:
            store.insert("config", LANGUAGES_DOC_ID, {"rtl": []})
        except ConflictError:
            pass

    def mutate(doc: dict[str, Any]) -> dict[str, Any]:
        rtl = set(doc.get("rtl", []))
        if direction == DIRECTION_RTL:
            rtl.add(code)
        else:
            rtl.discard(code)
        return {"rtl": sorted(rtl)}

    store.update("config", LANGUAGES_DOC_ID, mutate)


def direction_map(store: DocumentStore, codes: Iterable[str]) -> dict[str, str]:
    doc = store.get("config", LANGUAGES_DOC_ID)
    rtl = set(doc.get("rtl", [])) if doc else set()
    return {c: (DIRECTION_RTL if c in rtl else DIRECTION_LTR) for c in codes}


# ---------------------------------------------------------------------------
# On-disk corpus text format: one segment per line, UTF-8, LF endings, NFC.


def write_corpus_file(path: str | Path, lines: Iterable[str]) -> int:
    """Write the canonical line-per-segment text format; returns line count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for line in lines:
            handle.write(nfc(line.replace("\n", " ")) + "\n")
            count += 1
    return count


def read_corpus_file(path: str | Path) -> list[str]:
    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"corpus file {path} does not exist")
    with open(path, "r", encoding="utf-8", newline="\n") as handle:
        text = handle.read()
    if not text:
        return []
    if text.endswith("\n"):
        text = text[:-1]
    return [nfc(line) for line in text.split("\n")]


def corpus_file_name(language_tag: str, split: Optional[str] = None, version: Optional[str] = None) -> str:
    """``<LanguageTag>[.<split>][.<version>]``, e.g. ``nqo_Nkoo.devtest.v2``."""
    name = language_tag
    if split:
        name += f".{split}"
    if version:
        name += f".{version}"
    return name
