from __future__ import annotations

import csv
import io
import random
from datetime import timedelta

import pytest
from click.testing import CliRunner

from paracurate.admin import (
    accounting_csv,
    accounting_statements,
    create_workflows,
    export_dataset,
    load_dataset,
    system_report,
)
from paracurate.cli import cli
from paracurate.errors import ConflictError, FormatError, NotFoundError, PreconditionError
from paracurate.models import parse_rfc3339
from paracurate.simulate import SimulationBehavior, run_simulation
from paracurate.store import FileStore, MemoryStore, read_corpus_file, write_corpus_file
from paracurate.tasks import assign_tasks, complete_task
from paracurate.workflow import advance_all

from conftest import START, make_user, seed_dataset
from paracurate.admin import add_user


# --- load-dataset ----------------------------------------------------------------


def write_pair(base, eng, fra, split=None):
    suffix = f".{split}" if split else ""
    write_corpus_file(base / f"eng_Latn{suffix}", eng)
    write_corpus_file(base / f"fra_Latn{suffix}", fra)


def test_load_two_files_five_lines(store, tmp_path):
    write_pair(tmp_path, [f"e{i}" for i in range(5)], [f"f{i}" for i in range(5)])
    count = load_dataset(store, tmp_path, "ds", ["eng_Latn", "fra_Latn"], "nqo_Nkoo")
    assert count == 5
    assert len(store.list("datasets", {"datasetId": "ds"})) == 5


def test_line_count_mismatch_imports_nothing(store, tmp_path):
    write_pair(tmp_path, ["a"] * 5, ["b"] * 4)
    with pytest.raises(FormatError):
        load_dataset(store, tmp_path, "ds", ["eng_Latn", "fra_Latn"], "nqo_Nkoo")
    assert store.list("datasets") == []


def test_reimport_conflicts_unless_replace(store, tmp_path):
    write_pair(tmp_path, ["a", "b"], ["c", "d"])
    load_dataset(store, tmp_path, "ds", ["eng_Latn", "fra_Latn"], "nqo_Nkoo")
    with pytest.raises(ConflictError):
        load_dataset(store, tmp_path, "ds", ["eng_Latn", "fra_Latn"], "nqo_Nkoo")
    count = load_dataset(store, tmp_path, "ds", ["eng_Latn", "fra_Latn"], "nqo_Nkoo", replace=True)
    assert count == 2
    assert len(store.list("datasets", {"datasetId": "ds"})) == 2


def test_load_with_split_suffix(store, tmp_path):
    write_pair(tmp_path, ["x"], ["y"], split="devtest")
    count = load_dataset(
        store, tmp_path, "ds", ["eng_Latn", "fra_Latn"], "nqo_Nkoo", split="devtest"
    )
    assert count == 1


# --- create-workflows ---------------------------------------------------------------


def test_create_workflows_counts_and_priorities(store, tmp_path):
    seed_dataset(store, tmp_path, lines=4, with_workflows=False)
    created = create_workflows(store, "tiny", priority_start=10)
    assert created == 4
    priorities = [d["priority"] for d in store.list("workflows")]
    assert priorities == [10, 11, 12, 13]
    assert all(d["status"] == "active" for d in store.list("workflows"))


def test_create_workflows_twice_conflicts(store, tmp_path):
    seed_dataset(store, tmp_path, lines=1)
    with pytest.raises(ConflictError):
        create_workflows(store, "tiny")


def test_create_workflows_unknown_dataset(store):
    with pytest.raises(NotFoundError):
        create_workflows(store, "ghost")


def test_single_home_invariant_after_simulation(store, tmp_path):
    for i in range(4):
        add_user(store, make_user(f"u{i}", level=3))
    seed_dataset(store, tmp_path, lines=5)
    run_simulation(store, random.Random(1), SimulationBehavior(max_passes=200))
    homes = [(d["datasetId"], d["segmentId"]) for d in store.list("workflows")]
    assert len(homes) == len(set(homes))


# --- system-report -------------------------------------------------------------------


def test_report_empty_system(store):
    assert system_report(store) == {}


def test_report_matches_scan_oracle(store, tmp_path):
    for i in range(4):
        add_user(store, make_user(f"u{i}", level=3))
    seed_dataset(store, tmp_path, lines=3)
    advance_all(store)
    assign_tasks(store, START)
    report = system_report(store)

    workflows = store.list("workflows")
    tasks = store.list("annotation-tasks")
    for status in ("active", "completed"):
        expected = sum(1 for d in workflows if d["status"] == status)
        assert report["tiny"]["workflows"].get(status, 0) == expected
    for status in ("unassigned", "assigned", "completed"):
        expected = sum(1 for d in tasks if d["status"] == status)
        assert report["tiny"]["tasks"].get(status, 0) == expected


def test_report_completed_run_has_no_active(store, tmp_path):
    for i in range(4):
        add_user(store, make_user(f"u{i}", level=3))
    seed_dataset(store, tmp_path, lines=3)
    run_simulation(store, random.Random(2))
    report = system_report(store)
    assert report["tiny"]["workflows"].get("active", 0) == 0
    assert report["tiny"]["workflows"]["completed"] == 3


# --- export-dataset ------------------------------------------------------------------


def finished_store(store, tmp_path, lines=4):
    for i in range(5):
        add_user(store, make_user(f"u{i}", level=3))
    seed_dataset(store, tmp_path, lines=lines)
    result = run_simulation(store, random.Random(3))
    assert result.completed_workflows == lines
    return store


def test_export_requires_completion(store, tmp_path):
    seed_dataset(store, tmp_path, lines=2)
    with pytest.raises(PreconditionError):
        export_dataset(store, "tiny", tmp_path / "out")
    export_dataset(store, "tiny", tmp_path / "out", partial=True)


def test_export_files_line_parallel(store, tmp_path):
    finished_store(store, tmp_path)
    written = export_dataset(store, "tiny", tmp_path / "out")
    names = sorted(p.name for p in written)
    assert names == sorted([
        "eng_Latn", "fra_Latn", "nqo_Nkoo",
        "nqo_Nkoo.v1", "nqo_Nkoo.v2", "nqo_Nkoo.v3", "nqo_Nkoo.v4",
    ])
    counts = {p.name: len(read_corpus_file(p)) for p in written}
    assert set(counts.values()) == {4}


def test_two_round_segments_pad_v4_with_v3(store, tmp_path):
    finished_store(store, tmp_path, lines=6)
    export_dataset(store, "tiny", tmp_path / "out")
    v3 = read_corpus_file(tmp_path / "out" / "tiny" / "nqo_Nkoo.v3")
    v4 = read_corpus_file(tmp_path / "out" / "tiny" / "nqo_Nkoo.v4")
    final = read_corpus_file(tmp_path / "out" / "tiny" / "nqo_Nkoo")
    segments = store.list("datasets", {"datasetId": "tiny"})
    for line_no, doc in enumerate(segments):
        labels = [v["label"] for v in doc["targetVersions"]]
        if labels[-1] == "v3":
            assert v4[line_no] == v3[line_no]
        assert final[line_no] == doc["targetVersions"][-1]["text"]


def test_reexport_byte_identical(store, tmp_path):
    finished_store(store, tmp_path)
    export_dataset(store, "tiny", tmp_path / "out1")
    export_dataset(store, "tiny", tmp_path / "out2")
    for p1 in sorted((tmp_path / "out1" / "tiny").iterdir()):
        p2 = tmp_path / "out2" / "tiny" / p1.name
        assert p1.read_bytes() == p2.read_bytes()


def test_export_import_roundtrip(store, tmp_path):
    eng, fra = seed_dataset(store, tmp_path, lines=3, with_workflows=False)
    export_dataset(store, "tiny", tmp_path / "out", partial=True, with_edits=False)
    second = MemoryStore()
    load_dataset(
        second, tmp_path / "out" / "tiny", "tiny", ["eng_Latn", "fra_Latn"], "nqo_Nkoo"
    )
    originals = store.list("datasets")
    reloaded = second.list("datasets")
    assert [d["sources"] for d in reloaded] == [d["sources"] for d in originals]


# --- accounting ------------------------------------------------------------------------


def test_accounting_empty(store):
    rows = accounting_statements(store)
    assert rows == []
    assert accounting_csv(rows).splitlines() == [
        "user_id,dataset_id,month,task_type,completed_count"
    ]


def test_accounting_counts_reconcile(store, tmp_path):
    finished_store(store, tmp_path)
    rows = accounting_statements(store)
    total = sum(r.completed_count for r in rows)
    completed = store.list("annotation-tasks", {"status": "completed"})
    assert total == len(completed)
    assert all(r.completed_count >= 1 for r in rows)


def test_accounting_month_boundary_utc(store, tmp_path):
    add_user(store, make_user("amy", level=3))
    seed_dataset(store, tmp_path, lines=1)
    advance_all(store)
    last_moment = parse_rfc3339("2024-01-31T23:59:00+00:00")
    (task_id, user_id), = assign_tasks(store, last_moment)
    complete_task(store, task_id, user_id, "text", last_moment)
    rows = accounting_statements(store)
    assert [r.month for r in rows] == ["2024-01"]
    assert accounting_statements(store, from_month="2024-02") == []
    assert accounting_statements(store, to_month="2023-12") == []
    assert len(accounting_statements(store, "2024-01", "2024-01")) == 1


def test_accounting_bad_month_bound(store):
    with pytest.raises(FormatError):
        accounting_statements(store, from_month="January")


# --- CLI surface -------------------------------------------------------------------------


@pytest.fixture
def cli_env(tmp_path):
    corpus = tmp_path / "corpus"
    write_pair(corpus, ["hello one", "hello two"], ["bonjour un", "bonjour deux"])
    return CliRunner(), tmp_path, corpus


def run_cli(runner, tmp_path, *args):
    return runner.invoke(
        cli, ["--store", str(tmp_path / "store"), *args], catch_exceptions=False
    )


def test_cli_end_to_end(cli_env):
    runner, tmp_path, corpus = cli_env
    result = run_cli(
        runner, tmp_path,
        "load-dataset", str(corpus), "demo",
        "--language", "eng_Latn", "--language", "fra_Latn",
        "--target-language", "nqo_Nkoo",
    )
    assert result.exit_code == 0, result.output
    assert "imported 2 segments" in result.output

    result = run_cli(runner, tmp_path, "create-workflows", "demo")
    assert "created 2 workflows" in result.output

    result = run_cli(runner, tmp_path, "user", "add", "amy", "--translator",
                     "--verifier-level", "3", "--source-language", "eng_Latn")
    assert result.exit_code == 0

    result = run_cli(runner, tmp_path, "system-report")
    assert "demo:" in result.output
    assert "workflows: active=2" in result.output

    result = run_cli(runner, tmp_path, "export-dataset", "demo", str(tmp_path / "exp"),
                     "--partial")
    assert result.exit_code == 0

    result = run_cli(runner, tmp_path, "accounting-statements")
    assert result.output.startswith("user_id,dataset_id,month")

    result = run_cli(runner, tmp_path, "config", "set-direction", "nqo_Nkoo", "rtl")
    assert "nqo_Nkoo -> rtl" in result.output


def test_cli_align_and_report(cli_env):
    runner, tmp_path, _ = cli_env
    lines = [f"{chr(65 + i) * 8} tail {i}" for i in range(4)]
    perm = [2, 0, 3, 1]
    write_corpus_file(tmp_path / "consensus.txt", lines)
    write_corpus_file(tmp_path / "variant.txt", [lines[p] for p in perm])
    write_corpus_file(tmp_path / "target.txt", [f"tgt {p}" for p in perm])
    result = run_cli(
        runner, tmp_path, "align",
        "--consensus", str(tmp_path / "consensus.txt"),
        "--ref", str(tmp_path / "variant.txt"),
        "--target", str(tmp_path / "target.txt"),
        "--out-dir", str(tmp_path / "aligned"),
        "--report", str(tmp_path / "report.csv"),
    )
    assert result.exit_code == 0, result.output
    assert read_corpus_file(tmp_path / "aligned" / "target.txt") == [
        "tgt 0", "tgt 1", "tgt 2", "tgt 3"
    ]
    report = (tmp_path / "report.csv").read_text(encoding="utf-8")
    assert report.startswith("variant_line,consensus_line,cost")


def test_cli_exit_codes(tmp_path):
    import subprocess
    import sys

    def run(*args):
        return subprocess.run(
            [sys.executable, "-m", "paracurate.cli", "--store", str(tmp_path / "db"), *args],
            capture_output=True,
            text=True,
        )

    ok = run("system-report")
    assert ok.returncode == 0

    user_error = run("create-workflows", "ghost")  # dataset not imported
    assert user_error.returncode == 1
    assert "error" in user_error.stderr

    usage_error = run("no-such-command")
    assert usage_error.returncode == 1


def test_cli_stats_csv(store, tmp_path, cli_env):
    runner, cli_tmp, corpus = cli_env
    # Build a completed dataset in a file store the CLI can read.
    file_store = FileStore(cli_tmp / "store")
    for i in range(5):
        add_user(file_store, make_user(f"u{i}", level=3))
    seed_dataset(file_store, cli_tmp / "seed", lines=3)
    run_simulation(file_store, random.Random(4))
    result = run_cli(runner, cli_tmp, "stats", "tiny")
    assert result.exit_code == 0, result.output
    reader = csv.DictReader(io.StringIO(result.output))
    rows = list(reader)
    assert rows and rows[0]["corpus"] == "tiny"
    assert {"corpus", "segments", "words", "round", "pct_edited", "mean_ed", "se_ed"} <= set(rows[0])
