"""End-to-end curation walkthrough.

Imports a tiny parallel corpus, registers a team with mixed verifier
levels, and lets the simulator play translator: every segment is translated
once, copyedited two or three times, and the third round appears exactly
when an earlier round changed the text.  Finishes with the system report,
the exported files, and the per-round copyedit log.
"""

import random
import tempfile
from pathlib import Path

from paracurate.admin import (
    add_user,
    create_workflows,
    export_dataset,
    load_dataset,
    system_report,
)
from paracurate.models import UserProfile
from paracurate.simulate import SimulationBehavior, run_simulation
from paracurate.store import MemoryStore, read_corpus_file, write_corpus_file

workdir = Path(tempfile.mkdtemp(prefix="curation-demo-"))
store = MemoryStore()

print("== 1. import a 12-segment English/French corpus ==")
source_dir = workdir / "source"
write_corpus_file(source_dir / "eng_Latn", [f"English sentence {i}." for i in range(12)])
write_corpus_file(source_dir / "fra_Latn", [f"Phrase française {i}." for i in range(12)])
count = load_dataset(store, source_dir, "demo", ["eng_Latn", "fra_Latn"], "nqo_Nkoo")
print(f"imported {count} segments\n")

print("== 2. register the team (levels decide who may verify which round) ==")
team = [("aminata", 3), ("boubacar", 3), ("chiara", 3), ("daouda", 3), ("elena", 2), ("fode", 1)]
for name, level in team:
    add_user(store, UserProfile(
        user_id=name,
        is_active_translator=True,
        is_active_verifier=level > 0,
        verifier_level=level,
        preferred_source_languages=["eng_Latn", "fra_Latn"],
        ui_language="nqo_Nkoo",
        max_open_tasks=6,
    ))
    print(f"  {name}: verifier level {level}")

print("\n== 3. create one prioritized workflow per segment ==")
created = create_workflows(store, "demo")
print(f"created {created} active workflows\n")

print("== 4. run the managers until every workflow completes ==")
result = run_simulation(store, random.Random(2024), SimulationBehavior(edit_probability=0.5))
print(f"passes:       {result.passes}")
print(f"assignments:  {result.assignments}")
print(f"completions:  {result.completions}")
print(f"skips:        {result.skips}")
print(f"revocations:  {result.revocations} (expired leases reclaimed)")
print(f"completed:    {result.completed_workflows}/{count} workflows\n")

print("== 5. system report reconciles with the raw collections ==")
for dataset, counts in system_report(store).items():
    print(f"  {dataset}: {counts}")

print("\n== 6. export: final text plus the v1..v4 round logs, line-parallel ==")
written = export_dataset(store, "demo", workdir / "export")
for path in written:
    print(f"  {path.name:<14} {len(read_corpus_file(path))} lines")

print("\n== 7. one segment's journey through the rounds ==")
doc = store.list("datasets", {"datasetId": "demo"})[0]
for version in doc["targetVersions"]:
    print(f"  {version['label']} by {version['authorUserId']:<9}: {version['text']}")
print(f"\nartifacts left in {workdir}")
