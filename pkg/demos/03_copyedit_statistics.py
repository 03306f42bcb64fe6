"""Copyedit statistics from round logs.

Runs a quick simulated curation, then reports, per verification round, how
many segments changed and how large the edits were (mean ± standard error
of the character edit distance over the edited segments).  Also shows the
script-aware word counter: Nko punctuation splits words even without
surrounding spaces.
"""

import random
import tempfile
from pathlib import Path

from paracurate.admin import add_user, create_workflows, export_dataset, load_dataset
from paracurate.metrics import (
    corpus_summary,
    dataset_round_stats,
    format_round_stats,
    word_count,
)
from paracurate.models import UserProfile
from paracurate.simulate import SimulationBehavior, run_simulation
from paracurate.store import MemoryStore, write_corpus_file

workdir = Path(tempfile.mkdtemp(prefix="stats-demo-"))
store = MemoryStore()

source_dir = workdir / "source"
write_corpus_file(source_dir / "eng_Latn", [f"Sentence number {i} for the stats demo." for i in range(60)])
load_dataset(store, source_dir, "stats-demo", ["eng_Latn"], "nqo_Nkoo")
for i in range(6):
    add_user(store, UserProfile(
        user_id=f"user{i}", is_active_translator=True, is_active_verifier=True,
        verifier_level=3, preferred_source_languages=["eng_Latn"],
        ui_language="eng_Latn", max_open_tasks=15,
    ))
create_workflows(store, "stats-demo")
run_simulation(store, random.Random(7), SimulationBehavior(edit_probability=0.45))

print("== per-round copyedit statistics (edited %, edit magnitude) ==")
for stats in dataset_round_stats(store, "stats-demo"):
    print(f"  {stats.round}: n={stats.segment_count:>3}  {format_round_stats(stats)}")

print("\n== exported file summary: lines and script-aware word counts ==")
export_dataset(store, "stats-demo", workdir / "export")
for summary in corpus_summary(workdir / "export", "stats-demo"):
    print(f"  {summary.lines:>5} {summary.words:>6}  {summary.dataset_id}/{summary.file_name}")

print("\n== word counting across scripts ==")
samples = [
    ("plain spaces", "three latin words"),
    ("nko comma, no spaces", "ߞߏߓߊ߸ߘߏ߫ߞߏ"),
    ("arabic comma, no spaces", "ߛߓߍ،ߞߊߙߊ߲"),
    ("mixed punctuation", "a,b;c ߘߏ߸ߓߊ"),
]
for label, text in samples:
    print(f"  {label:<26} -> {word_count(text)} words")
