"""Consensus-based multitext realignment.

Given a manually curated consensus reference and a drifted per-language
bitext (reference + target, line-parallel), this module matches each variant
reference line to a consensus line by minimizing the total character-level
edit distance over all injective line assignments, then reorders the target
file into consensus order.  Lines with no partner (when the two references
disagree in length) are dropped and reported rather than guessed at.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import FormatError

# Exact lexicographic tie-breaking re-solves sub-assignments per row; past
# this size we fall back to the (deterministic) solver output alone.
CANONICAL_TIE_BREAK_LIMIT = 64


def edit_distance(a: str, b: str) -> int:
    """Character-level Levenshtein distance with unit edit costs."""
    if a == b:
        return 0
    # Strip the common prefix and suffix; they never contribute edits.
    lo = 0
    hi_a, hi_b = len(a), len(b)
    while lo < hi_a and lo < hi_b and a[lo] == b[lo]:
        lo += 1
    while hi_a > lo and hi_b > lo and a[hi_a - 1] == b[hi_b - 1]:
        hi_a -= 1
        hi_b -= 1
    a, b = a[lo:hi_a], b[lo:hi_b]
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            current[j] = min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            )
        previous = current
    return previous[-1]


def _distance_row(args: tuple[str, tuple[str, ...]]) -> list[int]:
    line, references = args
    return [edit_distance(line, ref) for ref in references]


def build_cost_matrix(
    variant_lines: Sequence[str],
    consensus_lines: Sequence[str],
    workers: int = 1,
) -> np.ndarray:
    """Edit-distance matrix, rows = variant lines, columns = consensus lines.

    Rows are independent, so they can be computed by a process pool; the
    result is identical regardless of ``workers``.
    """
    consensus = tuple(consensus_lines)
    jobs = [(line, consensus) for line in variant_lines]
    if workers > 1 and len(jobs) > 1:
        chunk = max(1, len(jobs) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_distance_row, jobs, chunksize=chunk))
    else:
        rows = [_distance_row(job) for job in jobs]
    return np.array(rows, dtype=np.int64).reshape(len(variant_lines), len(consensus))


@dataclass
class AlignmentResult:
    """An injective variant-line -> consensus-line matching of minimal cost."""

    mapping: dict[int, int] = field(default_factory=dict)
    total_cost: int = 0
    unmatched_variant_lines: list[int] = field(default_factory=list)
    unmatched_consensus_lines: list[int] = field(default_factory=list)


def _lsap_cost(matrix: np.ndarray) -> int:
    if matrix.size == 0 or 0 in matrix.shape:
        return 0
    rows, cols = linear_sum_assignment(matrix)
    return int(matrix[rows, cols].sum())


def solve_assignment(cost_matrix) -> AlignmentResult:
    """Globally minimal partial injective assignment of size min(rows, cols).

    Ties between equal-cost assignments are broken toward the
    lexicographically smallest mapping (rows in order, lower column index
    first, matched before unmatched) while the matrix is small enough for
    the extra solves; larger inputs keep the solver's deterministic output.
    """
    matrix = np.asarray(cost_matrix)
    if matrix.size == 0:
        return AlignmentResult()
    if matrix.ndim != 2:
        raise ValueError(f"expected a 2-D cost matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)) or np.any(matrix < 0):
        raise ValueError("cost matrix entries must be finite and non-negative")

    n_rows, n_cols = matrix.shape
    row_ind, col_ind = linear_sum_assignment(matrix)
    total = int(matrix[row_ind, col_ind].sum())

    integral = np.issubdtype(matrix.dtype, np.integer)
    if integral and max(n_rows, n_cols) <= CANONICAL_TIE_BREAK_LIMIT:
        mapping = _lexicographic_optimum(matrix.astype(np.int64), total)
    else:
        mapping = {int(r): int(c) for r, c in zip(row_ind, col_ind)}

    return AlignmentResult(
        mapping=mapping,
        total_cost=total,
        unmatched_variant_lines=[i for i in range(n_rows) if i not in mapping],
        unmatched_consensus_lines=sorted(set(range(n_cols)) - set(mapping.values())),
    )


def _lexicographic_optimum(matrix: np.ndarray, total: int) -> dict[int, int]:
    """Among all minimum-cost assignments, pick the lexicographically smallest.

    Rows are fixed in ascending order; for each row the smallest feasible
    column is kept (feasible = the remaining sub-problem can still reach the
    optimum), with "unmatched" considered only after every column.
    """
    n_rows, n_cols = matrix.shape
    size = min(n_rows, n_cols)
    free_cols = list(range(n_cols))
    unmatched_left = n_rows - size
    budget = total
    mapping: dict[int, int] = {}
    for i in range(n_rows):
        rest_rows = list(range(i + 1, n_rows))
        placed = False
        for idx, j in enumerate(free_cols):
            cost = int(matrix[i, j])
            if cost > budget:
                continue
            sub_cols = free_cols[:idx] + free_cols[idx + 1 :]
            sub = matrix[np.ix_(rest_rows, sub_cols)]
            if _lsap_cost(sub) == budget - cost:
                mapping[i] = j
                budget -= cost
                free_cols.pop(idx)
                placed = True
                break
        if not placed:
            if unmatched_left <= 0:
                raise AssertionError("optimal assignment reconstruction failed")
            sub = matrix[np.ix_(rest_rows, free_cols)]
            if _lsap_cost(sub) != budget:
                raise AssertionError("optimal assignment reconstruction failed")
            unmatched_left -= 1
    return mapping


@dataclass
class RealignmentReport:
    total_cost: int
    matched_count: int
    pairs: list[tuple[int, int, int]]  # (variant line, consensus line, cost)
    dropped_consensus: list[tuple[int, str]]
    dropped_variant: list[tuple[int, str]]


def align_references(
    consensus_ref: Sequence[str],
    variant_ref: Sequence[str],
    workers: int = 1,
) -> tuple[np.ndarray, AlignmentResult]:
    """Match variant reference lines to consensus lines at minimal total cost."""
    matrix = build_cost_matrix(variant_ref, consensus_ref, workers=workers)
    return matrix, solve_assignment(matrix)


def realign_corpus(
    consensus_ref: Sequence[str],
    variant_ref: Sequence[str],
    variant_target: Sequence[str],
    workers: int = 1,
    precomputed: Optional[tuple[np.ndarray, AlignmentResult]] = None,
) -> tuple[list[str], RealignmentReport]:
    """Reorder ``variant_target`` into consensus line order.

    Output line k carries the target line whose reference line matched
    consensus line k; consensus positions with no partner are dropped from
    the output and reported, as are leftover variant lines.  Pass the
    ``align_references`` result as ``precomputed`` to reorder several target
    files against one reference pair without re-solving.
    """
    if len(variant_ref) != len(variant_target):
        raise FormatError(
            f"reference/target line counts differ: {len(variant_ref)} vs {len(variant_target)}"
        )
    matrix, result = precomputed or align_references(consensus_ref, variant_ref, workers=workers)

    by_consensus = {j: i for i, j in result.mapping.items()}
    output: list[str] = []
    pairs: list[tuple[int, int, int]] = []
    for j in range(len(consensus_ref)):
        if j in by_consensus:
            i = by_consensus[j]
            output.append(variant_target[i])
            pairs.append((i, j, int(matrix[i, j])))
    report = RealignmentReport(
        total_cost=result.total_cost,
        matched_count=len(result.mapping),
        pairs=pairs,
        dropped_consensus=[(j, consensus_ref[j]) for j in result.unmatched_consensus_lines],
        dropped_variant=[(i, variant_ref[i]) for i in result.unmatched_variant_lines],
    )
    return output, report


def write_report_csv(report: RealignmentReport, path: str | Path) -> None:
    """Matched pairs as CSV, followed by a dropped-lines section."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["variant_line", "consensus_line", "cost"])
        for i, j, cost in report.pairs:
            writer.writerow([i, j, cost])
        writer.writerow([])
        writer.writerow(["dropped_side", "line_index", "text"])
        for j, text in report.dropped_consensus:
            writer.writerow(["consensus", j, text])
        for i, text in report.dropped_variant:
            writer.writerow(["variant", i, text])
