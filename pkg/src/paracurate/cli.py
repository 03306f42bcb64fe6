"""Operator command line.

Exit codes: 0 success, 1 user error (bad input, conflicts, unmet
preconditions), 2 system error.  Output goes to stdout, errors to stderr.
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

import click

from . import admin, metrics
from .align import align_references, realign_corpus, write_report_csv
from .api import hash_secret
from .config import load_config
from .errors import CurationError
from .models import UserProfile
from .store import (
    open_store,
    read_corpus_file,
    set_language_direction,
    write_corpus_file,
)

EXIT_USER_ERROR = 1
EXIT_SYSTEM_ERROR = 2


@click.group()
@click.option("--store", "store_location", default="./curation-store", show_default=True,
              help="Store location: a directory path or 'memory:'.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON file overriding system settings.")
@click.pass_context
def cli(ctx: click.Context, store_location: str, config_path: str | None) -> None:
    """Parallel-text curation operations."""
    ctx.ensure_object(dict)
    ctx.obj["store_location"] = store_location
    ctx.obj["config"] = load_config(config_path)


def _store(ctx: click.Context):
    return open_store(ctx.obj["store_location"])


@cli.command("load-dataset")
@click.argument("path", type=click.Path(exists=True, file_okay=False))
@click.argument("dataset_id")
@click.option("--language", "languages", multiple=True, required=True,
              help="Language tag of a file to import (repeatable).")
@click.option("--target-language", required=True, help="Tag translations will be written in.")
@click.option("--split", default=None, help="Optional split suffix in file names (dev, devtest).")
@click.option("--replace", is_flag=True, help="Replace an already imported dataset.")
@click.pass_context
def load_dataset_cmd(ctx, path, dataset_id, languages, target_language, split, replace):
    """Import a line-parallel corpus from PATH into DATASET_ID."""
    count = admin.load_dataset(
        _store(ctx), path, dataset_id, list(languages), target_language,
        split=split, replace=replace,
    )
    click.echo(f"imported {count} segments into {dataset_id}")


@cli.command("create-workflows")
@click.argument("dataset_id")
@click.option("--priority-start", default=0, show_default=True, type=int)
@click.pass_context
def create_workflows_cmd(ctx, dataset_id, priority_start):
    """Create one active translation workflow per segment of DATASET_ID."""
    created = admin.create_workflows(_store(ctx), dataset_id, priority_start)
    click.echo(f"created {created} workflows for {dataset_id}")


@cli.command("system-report")
@click.pass_context
def system_report_cmd(ctx):
    """Workflow and task counts by status by dataset."""
    report = admin.system_report(_store(ctx))
    if not report:
        click.echo("no workflows or tasks")
        return
    for dataset_id in sorted(report):
        click.echo(f"{dataset_id}:")
        for kind in ("workflows", "tasks"):
            counts = report[dataset_id][kind]
            rendered = ", ".join(f"{status}={counts[status]}" for status in sorted(counts)) or "none"
            click.echo(f"  {kind}: {rendered}")


@cli.command("export-dataset")
@click.argument("dataset_id")
@click.argument("out_dir", type=click.Path(file_okay=False))
@click.option("--with-edits/--no-edits", default=True, show_default=True,
              help="Also write the v1..v4 round log files.")
@click.option("--partial", is_flag=True, help="Export even if workflows are still active.")
@click.pass_context
def export_dataset_cmd(ctx, dataset_id, out_dir, with_edits, partial):
    """Export DATASET_ID as line-parallel text files under OUT_DIR."""
    written = admin.export_dataset(_store(ctx), dataset_id, out_dir,
                                   with_edits=with_edits, partial=partial)
    for path in written:
        click.echo(str(path))


@cli.command("accounting-statements")
@click.option("--from-month", default=None, help="Earliest month, YYYY-MM (inclusive).")
@click.option("--to-month", default=None, help="Latest month, YYYY-MM (inclusive).")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write CSV here instead of stdout.")
@click.pass_context
def accounting_cmd(ctx, from_month, to_month, out):
    """Completed tasks by user by dataset by month, as CSV."""
    rows = admin.accounting_statements(_store(ctx), from_month, to_month)
    payload = admin.accounting_csv(rows)
    if out:
        Path(out).write_text(payload, encoding="utf-8")
        click.echo(f"wrote {len(rows)} rows to {out}")
    else:
        click.echo(payload, nl=False)


@cli.command("align")
@click.option("--consensus", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Consensus reference file (the order to align to).")
@click.option("--ref", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Variant reference file, line-parallel with each target.")
@click.option("--target", "targets", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Target file to reorder (repeatable).")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
@click.option("--workers", default=1, show_default=True, type=int,
              help="Processes for the cost-matrix rows.")
def align_cmd(consensus, ref, targets, out_dir, report_path, workers):
    """Reorder target files into the consensus line order."""
    consensus_lines = read_corpus_file(consensus)
    ref_lines = read_corpus_file(ref)
    alignment = align_references(consensus_lines, ref_lines, workers=workers)
    last_report = None
    for target in targets:
        target_lines = read_corpus_file(target)
        output, report = realign_corpus(
            consensus_lines, ref_lines, target_lines, precomputed=alignment
        )
        out_path = Path(out_dir) / Path(target).name
        write_corpus_file(out_path, output)
        last_report = report
        dropped = len(report.dropped_consensus) + len(report.dropped_variant)
        click.echo(
            f"{target}: matched {report.matched_count} lines, "
            f"total cost {report.total_cost}, dropped {dropped} -> {out_path}"
        )
    if report_path and last_report is not None:
        write_report_csv(last_report, report_path)
        click.echo(f"report written to {report_path}")


@cli.command("stats")
@click.argument("dataset_id")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write CSV here instead of stdout.")
@click.pass_context
def stats_cmd(ctx, dataset_id, out):
    """Copyedit statistics for DATASET_ID as CSV."""
    rows = metrics.stats_csv_rows(_store(ctx), dataset_id)
    fields = ["corpus", "segments", "words", "round", "pct_edited", "mean_ed", "se_ed"]
    handle = open(out, "w", encoding="utf-8", newline="") if out else sys.stdout
    try:
        writer = csv.DictWriter(handle, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out:
            handle.close()
            click.echo(f"wrote {len(rows)} rows to {out}")


@cli.group()
def user():
    """User provisioning."""


@user.command("add")
@click.argument("user_id")
@click.option("--translator/--no-translator", default=False, show_default=True)
@click.option("--verifier-level", default=0, show_default=True, type=click.IntRange(0, 3),
              help="0 disables copyedit assignments; 1..3 sets the maximum round.")
@click.option("--source-language", "source_languages", multiple=True,
              help="Preferred source language tag, in pane order (repeatable).")
@click.option("--ui-language", default="eng_Latn", show_default=True)
@click.option("--max-open-tasks", default=5, show_default=True, type=click.IntRange(min=1))
@click.option("--secret", default=None, help="Login secret for the workspace service.")
@click.pass_context
def user_add_cmd(ctx, user_id, translator, verifier_level, source_languages,
                 ui_language, max_open_tasks, secret):
    """Register a translator account."""
    profile = UserProfile(
        user_id=user_id,
        is_active_translator=translator,
        is_active_verifier=verifier_level > 0,
        verifier_level=verifier_level,
        preferred_source_languages=list(source_languages),
        ui_language=ui_language,
        max_open_tasks=max_open_tasks,
        secret_hash=hash_secret(secret) if secret else None,
    )
    admin.add_user(_store(ctx), profile)
    click.echo(f"added user {user_id}")


@cli.group("config")
def config_group():
    """Domain configuration stored in the config collection."""


@config_group.command("set-direction")
@click.argument("tag")
@click.argument("direction", type=click.Choice(["ltr", "rtl"]))
@click.pass_context
def set_direction_cmd(ctx, tag, direction):
    """Mark a language tag's writing direction (LTR is the default)."""
    set_language_direction(_store(ctx), tag, direction)
    click.echo(f"{tag} -> {direction}")


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_USER_ERROR)
    except click.Abort:
        sys.exit(EXIT_USER_ERROR)
    except CurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(EXIT_USER_ERROR)
    except Exception as exc:  # noqa: BLE001 - last-resort system error
        print(f"system error: {exc}", file=sys.stderr)
        sys.exit(EXIT_SYSTEM_ERROR)


if __name__ == "__main__":
    main()
