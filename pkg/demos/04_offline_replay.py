"""Offline work, replayed exactly once.

A translator loses connectivity, keeps working against their local queue,
and the client later replays the whole queue twice (a crash threw away its
bookkeeping).  Every envelope carries a client-chosen operation id, so the
service applies each action once no matter how often it is delivered.
"""

import tempfile
from datetime import datetime, timezone
from pathlib import Path

from fastapi.testclient import TestClient

from paracurate.admin import add_user, create_workflows, load_dataset
from paracurate.api import create_app, hash_secret
from paracurate.models import UserProfile
from paracurate.store import MemoryStore, write_corpus_file
from paracurate.tasks import assign_tasks
from paracurate.workflow import advance_all

workdir = Path(tempfile.mkdtemp(prefix="replay-demo-"))
store = MemoryStore()

source_dir = workdir / "source"
write_corpus_file(source_dir / "eng_Latn", [f"Offline sentence {i}." for i in range(3)])
load_dataset(store, source_dir, "offline-demo", ["eng_Latn"], "nqo_Nkoo")
create_workflows(store, "offline-demo")
add_user(store, UserProfile(
    user_id="aminata", is_active_translator=True, is_active_verifier=False,
    verifier_level=0, preferred_source_languages=["eng_Latn"],
    ui_language="nqo_Nkoo", max_open_tasks=10,
    secret_hash=hash_secret("s3cret"),
))

advance_all(store)
pairs = assign_tasks(store, datetime.now(timezone.utc))
print(f"assigned {len(pairs)} translation tasks to aminata\n")

client = TestClient(create_app(store))
token = client.post("/v1/auth/login", json={"userId": "aminata", "secret": "s3cret"}).json()["token"]
headers = {"Authorization": f"Bearer {token}"}

# The local queue built while offline: one envelope per keystroke of work.
queue = [
    {
        "clientOpId": f"aminata-3a1f-{n}",
        "taskId": task_id,
        "action": "submit",
        "text": f"ߛߓߍߟߌ {n}",
        "clientTimestamp": f"2024-03-05T10:15:0{n}+00:00",
    }
    for n, (task_id, _) in enumerate(pairs)
]

print("== reconnect: the client replays its whole queue ==")
first = client.post("/v1/submissions", headers=headers, json={"envelopes": queue}).json()
print("  first replay :", [r["result"] for r in first["results"]])

print("== the client crashed mid-ack and replays everything again ==")
second = client.post("/v1/submissions", headers=headers, json={"envelopes": queue}).json()
print("  second replay:", [r["result"] for r in second["results"]])

versions = [
    (doc["segmentId"], [v["text"] for v in doc["targetVersions"]])
    for doc in store.list("datasets", {"datasetId": "offline-demo"})
]
print("\n== stored versions: exactly one v1 per segment, no double applies ==")
for segment_id, texts in versions:
    print(f"  segment {segment_id}: {texts}")
