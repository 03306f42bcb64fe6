"""Independent reference implementations used to check the shipped code.

These stay deliberately naive (full DP tables, exhaustive enumeration) and
share no code with the package under test.
"""

from __future__ import annotations

import itertools

import numpy as np


def dp_full_matrix_distance(a: str, b: str) -> int:
    """Textbook full-matrix Wagner-Fischer, independent of the shipped kernel."""
    m, n = len(a), len(b)
    table = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        table[i][0] = i
    for j in range(n + 1):
        table[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    return table[m][n]


def exhaustive_edit_script_distance(a: str, b: str) -> int:
    """Un-memoized exhaustive search over edit scripts (lengths <= 7 only)."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    substitute = exhaustive_edit_script_distance(a[1:], b[1:]) + (a[0] != b[0])
    delete = exhaustive_edit_script_distance(a[1:], b) + 1
    insert = exhaustive_edit_script_distance(a, b[1:]) + 1
    return min(substitute, delete, insert)


def exhaustive_assignment_minimum(matrix: np.ndarray) -> int:
    """Minimum total cost over every injective assignment of size min(r, c)."""
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return 0
    best = None
    if rows <= cols:
        for chosen in itertools.permutations(range(cols), rows):
            cost = sum(int(matrix[i, j]) for i, j in enumerate(chosen))
            best = cost if best is None else min(best, cost)
    else:
        for chosen in itertools.permutations(range(rows), cols):
            cost = sum(int(matrix[i, j]) for j, i in enumerate(chosen))
            best = cost if best is None else min(best, cost)
    return best


def enumerate_optimal_mappings(matrix: np.ndarray, best: int) -> list[dict[int, int]]:
    """All optimal injective mappings as dicts, for tie-break checking."""
    rows, cols = matrix.shape
    out = []
    if rows <= cols:
        for chosen in itertools.permutations(range(cols), rows):
            if sum(int(matrix[i, j]) for i, j in enumerate(chosen)) == best:
                out.append({i: j for i, j in enumerate(chosen)})
    else:
        for rows_chosen in itertools.permutations(range(rows), cols):
            if sum(int(matrix[i, j]) for j, i in enumerate(rows_chosen)) == best:
                out.append({i: j for j, i in enumerate(rows_chosen)})
    return out


def mapping_sort_key(mapping: dict[int, int], n_rows: int):
    return tuple(mapping.get(i, float("inf")) for i in range(n_rows))
