"""Copyedit statistics and corpus summaries.

Round statistics report how many segments changed in a verification round
and how large the changes were (character edit distance).  Word counts are
script-aware: any Unicode punctuation or separator ends a word, which keeps
counts honest for scripts like Nko whose punctuation (e.g. the Nko comma
U+07F8 or the Arabic comma U+060C) often appears without surrounding
spaces.
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .align import edit_distance
from .errors import NotFoundError, ValidationError
from .models import MultilingualSegment
from .store import DocumentStore, read_corpus_file

ROUND_LABELS = ("v1->v2", "v2->v3", "v3->v4")


@dataclass(frozen=True)
class RoundStats:
    round: str
    segment_count: int
    edited_fraction: float
    mean_edit_distance: float
    stderr_edit_distance: float


def round_stats(log: Sequence[tuple[str, str]], round_label: str = "") -> RoundStats:
    """Statistics for one verification round from (previous, next) text pairs.

    The mean and standard error cover the edited segments only; an approval
    pass that changed nothing contributes to the edited fraction's
    denominator but not to the magnitude average.
    """
    if not log:
        raise ValidationError("round statistics need at least one segment pair")
    distances = [edit_distance(prev, nxt) for prev, nxt in log]
    edited = [d for d in distances if d > 0]
    fraction = len(edited) / len(distances)
    if not edited:
        return RoundStats(round_label, len(distances), 0.0, 0.0, 0.0)
    mean = sum(edited) / len(edited)
    if len(edited) == 1:
        stderr = 0.0
    else:
        variance = sum((d - mean) ** 2 for d in edited) / (len(edited) - 1)
        stderr = math.sqrt(variance) / math.sqrt(len(edited))
    return RoundStats(round_label, len(distances), fraction, mean, stderr)


def format_round_stats(stats: RoundStats) -> str:
    """Render as ``NN% / MM.MM ± S.SS`` (percent 0 decimals, magnitudes 2)."""
    return (
        f"{stats.edited_fraction * 100:.0f}% / "
        f"{stats.mean_edit_distance:.2f} ± {stats.stderr_edit_distance:.2f}"
    )


def _is_word_separator(ch: str) -> bool:
    if ch.isspace():
        return True
    category = unicodedata.category(ch)
    return category.startswith("P") or category.startswith("Z")


def word_count(text: str, language: Optional[str] = None) -> int:
    """Count maximal runs of non-separator characters.

    Separators are Unicode whitespace plus every punctuation mark, so words
    joined by script-specific punctuation with no spaces still split.  The
    rule is language-independent; the tag parameter exists for callers that
    track per-language counts.
    """
    count = 0
    in_word = False
    for ch in text:
        if _is_word_separator(ch):
            in_word = False
        elif not in_word:
            in_word = True
            count += 1
    return count


@dataclass(frozen=True)
class CorpusSummary:
    dataset_id: str
    file_name: str
    lines: int
    words: int


def corpus_summary(export_dir: str | Path, dataset_id: str) -> list[CorpusSummary]:
    """(lines, words) per exported file of a dataset, sorted by file name."""
    dataset_dir = Path(export_dir) / dataset_id
    if not dataset_dir.is_dir():
        raise NotFoundError(f"no export found for dataset {dataset_id!r} under {export_dir}")
    summaries = []
    for path in sorted(dataset_dir.iterdir()):
        if not path.is_file():
            continue
        lines = read_corpus_file(path)
        words = sum(word_count(line) for line in lines)
        summaries.append(CorpusSummary(dataset_id, path.name, len(lines), words))
    return summaries


def version_pairs_for_round(
    segments: Iterable[MultilingualSegment], round_index: int
) -> list[tuple[str, str]]:
    """(previous, next) texts for round ``round_index`` (0 -> v1->v2, ...).

    Only segments that actually reached the later version participate, so
    the populations line up with the copyedit tasks the round produced.
    """
    pairs = []
    for segment in segments:
        versions = segment.target_versions
        if len(versions) > round_index + 1:
            pairs.append((versions[round_index].text, versions[round_index + 1].text))
    return pairs


def dataset_round_stats(store: DocumentStore, dataset_id: str) -> list[RoundStats]:
    """Per-round statistics for every round the dataset has data for."""
    segments = [
        MultilingualSegment.from_doc(d)
        for d in store.list("datasets", {"datasetId": dataset_id})
    ]
    if not segments:
        raise NotFoundError(f"dataset {dataset_id!r} has no segments")
    out = []
    for round_index, label in enumerate(ROUND_LABELS):
        pairs = version_pairs_for_round(segments, round_index)
        if pairs:
            out.append(round_stats(pairs, label))
    return out


def dataset_word_count(store: DocumentStore, dataset_id: str) -> tuple[int, int]:
    """(segments, words) over the latest target version of each segment."""
    segments = [
        MultilingualSegment.from_doc(d)
        for d in store.list("datasets", {"datasetId": dataset_id})
    ]
    words = 0
    for segment in segments:
        latest = segment.latest_version()
        if latest is not None:
            words += word_count(latest.text)
    return len(segments), words


def stats_csv_rows(store: DocumentStore, dataset_id: str) -> list[dict[str, object]]:
    """Rows for the ``stats`` command: one per dataset round."""
    segment_count, words = dataset_word_count(store, dataset_id)
    rows = []
    for stats in dataset_round_stats(store, dataset_id):
        rows.append(
            {
                "corpus": dataset_id,
                "segments": segment_count,
                "words": words,
                "round": stats.round,
                "pct_edited": f"{stats.edited_fraction * 100:.0f}",
                "mean_ed": f"{stats.mean_edit_distance:.2f}",
                "se_ed": f"{stats.stderr_edit_distance:.2f}",
            }
        )
    return rows
