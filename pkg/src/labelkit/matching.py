"""Minimum-cost perfect matching on a square cost matrix.

Shortest-path augmentation with row/column potentials (the classic O(n^3)
assignment algorithm), followed by a tie-breaking pass that rewires the
solution to the lexicographically smallest assignment vector among all
minimum-cost assignments.  The tie-break works on the graph of edges that
are tight under the optimal potentials: by LP complementary slackness every
minimum-cost assignment uses only tight edges.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

from .errors import DataError

_TIGHT_TOL = 1e-9


def _hungarian_with_duals(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Solve the square assignment problem.

    Returns (row_to_col, u, v) where u, v are feasible potentials with
    u[i] + v[j] <= a[i, j] and equality on matched edges.
    """
    n = a.shape[0]
    INF = np.inf
    # 1-based columns internally; column 0 is the virtual start column.
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=np.int64)  # p[j] = row matched to column j
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, INF)
        way = np.zeros(n + 1, dtype=np.int64)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used[1:]
            cur = a[i0 - 1, :] - u[i0] - v[1:]
            minv1 = minv[1:]
            upd = free & (cur < minv1)
            minv1[upd] = cur[upd]
            way1 = way[1:]
            way1[upd] = j0
            masked = np.where(free, minv1, INF)
            j1 = int(np.argmin(masked)) + 1
            delta = masked[j1 - 1]
            u[p[used]] += delta
            v[used] -= delta
            minv1[free] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    row_to_col = np.zeros(n, dtype=np.int64)
    for j in range(1, n + 1):
        row_to_col[p[j] - 1] = j - 1
    return row_to_col, u[1:].copy(), v[1:].copy()


def _lex_smallest_optimum(
    a: np.ndarray, row_to_col: np.ndarray, u: np.ndarray, v: np.ndarray
) -> np.ndarray:
    """Rewire an optimal assignment to the lexicographically smallest one."""
    n = a.shape[0]
    scale = max(1.0, float(np.abs(a).max()))
    tol = _TIGHT_TOL * scale
    tight = (a - u[:, None] - v[None, :]) <= tol
    adj: List[np.ndarray] = [np.nonzero(tight[i])[0] for i in range(n)]
    if sum(len(c) for c in adj) == n:
        return row_to_col  # unique optimum, nothing to rewire
    match = row_to_col.copy()
    col_owner = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        col_owner[match[i]] = i
    fixed = np.zeros(n, dtype=bool)

    def reroute(i: int, j: int) -> bool:
        # Pin row i to column j; the displaced owner of j must find a new
        # tight column, bumping only rows that are not yet fixed.
        cur = int(match[i])
        owner = int(col_owner[j])
        visited = {j}

        def augment(r: int) -> bool:
            for c in adj[r]:
                c = int(c)
                if fixed[c] or c in visited:
                    continue
                visited.add(c)
                o = int(col_owner[c])
                if o == -1 or (o > i and augment(o)):
                    match[r] = c
                    col_owner[c] = r
                    return True
            return False

        col_owner[cur] = -1
        match[i] = j
        col_owner[j] = i
        if owner == -1 or augment(owner):
            return True
        match[i] = cur
        col_owner[cur] = i
        col_owner[j] = owner
        return False

    for i in range(n):
        for j in adj[i]:
            j = int(j)
            if j >= match[i]:
                break
            if fixed[j]:
                continue
            if reroute(i, j):
                break
        fixed[match[i]] = True
    return match


def min_cost_perfect_matching(cost_matrix) -> List[int]:
    """Minimum-weight perfect assignment of rows to columns.

    Returns ``assign`` with ``assign[row] = column``.  Deterministic: among
    all minimum-cost assignments, the lexicographically smallest assignment
    vector is returned.
    """
    a = np.asarray(cost_matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DataError(f"cost matrix must be square, got shape {a.shape}")
    if a.size == 0:
        return []
    if not np.all(np.isfinite(a)):
        raise DataError("cost matrix entries must be finite")
    row_to_col, u, v = _hungarian_with_duals(a)
    refined = _lex_smallest_optimum(a, row_to_col, u, v)
    return [int(c) for c in refined]


def matching_total(cost_matrix, assign: Sequence[int]) -> float:
    """Total weight of an assignment, summed in row order."""
    a = np.asarray(cost_matrix, dtype=float)
    total = 0.0
    for i, j in enumerate(assign):
        total += float(a[i, j])
    return total
