"""Optimal multi-page boundary labeling.

Two steps: a minimum-cost perfect matching assigns features to (port, page)
slots, possibly with crossings; then each page is rewired crossing-free
without changing its cost.  The rewiring is safe because permuting one
page's features over the same ports leaves the weight term untouched and
the matching already picked a length-minimal within-page arrangement.

Pages are padded with dummy features when n is not divisible by k.  The
padding convention pins dummies to the last page's rightmost ports, so the
matching only decides the real features' slots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import matching as _matching
from .errors import DataError
from .model import Feature, Instance, Labeling, State, make_dummy_ids, port_positions
from .stacking import crossing_free_min_length_assignment


@dataclass(frozen=True, eq=False)
class MatchingProblem:
    """The full bipartite problem: rows are features plus dummies, columns
    are (port, page) slots encoded as slot_index(j, i) = (i-1)*k + (j-1)."""

    cost_matrix: np.ndarray
    k: int
    pages: int
    row_ids: Tuple[str, ...]
    dummy_ids: frozenset

    @staticmethod
    def slot_index(port_index: int, page_index: int, k: int) -> int:
        return (page_index - 1) * k + (port_index - 1)

    @staticmethod
    def slot_of(index: int, k: int) -> Tuple[int, int]:
        """Inverse of slot_index: returns (port_index, page_index), 1-based."""
        return index % k + 1, index // k + 1


def edge_weight(
    feature: Optional[Feature],
    port_index: int,
    page_index: int,
    alpha: float,
    instance: Instance,
) -> float:
    """Cost of attaching ``feature`` to port ``port_index`` on page
    ``page_index``; ``None`` stands for a dummy (weight 0, no leader).

    Summing these over a complete assignment reproduces the multi-page
    objective exactly, which is what makes the two-step solve optimal.
    """
    k = instance.k
    scale = 1.0 / (k * 2.0**page_index)
    if feature is None:
        return scale * (1.0 - alpha)
    px = (port_index - 0.5) * instance.screen_width / k
    py = instance.screen_height
    length = abs(feature.x - px) + (py - feature.y)
    norm = instance.screen_width + instance.screen_height
    return scale * ((1.0 - alpha) * (1.0 - feature.weight) + alpha * length / norm)


def build_matching_problem(instance: Instance, alpha: float) -> MatchingProblem:
    """Full square cost matrix over all features (dummies last) and slots."""
    n, k = instance.n, instance.k
    pages = math.ceil(n / k)
    size = pages * k
    dummies = make_dummy_ids(size - n, [f.id for f in instance.features])
    rows: List[Optional[Feature]] = list(instance.features) + [None] * len(dummies)
    cost = np.zeros((size, size))
    for r, f in enumerate(rows):
        for i in range(1, pages + 1):
            for j in range(1, k + 1):
                cost[r, MatchingProblem.slot_index(j, i, k)] = edge_weight(
                    f, j, i, alpha, instance
                )
    return MatchingProblem(
        cost_matrix=cost,
        k=k,
        pages=pages,
        row_ids=tuple([f.id for f in instance.features] + dummies),
        dummy_ids=frozenset(dummies),
    )


def min_cost_perfect_matching(problem) -> List[int]:
    """Row-to-column assignment minimizing total weight; ties broken by the
    lexicographically smallest assignment vector."""
    matrix = problem.cost_matrix if isinstance(problem, MatchingProblem) else problem
    return _matching.min_cost_perfect_matching(matrix)


def resolve_page_crossings(
    page_features: Sequence[Feature],
    instance: Instance,
    page_index: int = 1,
    dummy_ids: Sequence[str] = (),
) -> State:
    """Crossing-free port assignment of one page's features, preserving the
    minimal total leader length.

    The features take the leftmost ports; ``dummy_ids`` (if any) fill the
    remaining rightmost ports in the given order.
    """
    k = instance.k
    n_real = len(page_features)
    if n_real + len(dummy_ids) != k:
        raise DataError(
            f"page has {n_real} features + {len(dummy_ids)} dummies, expected {k}"
        )
    ports = port_positions(instance)
    slot_xs = [ports[j][0] for j in range(n_real)]
    assign = crossing_free_min_length_assignment(page_features, slot_xs)
    slots: List[Optional[str]] = [None] * k
    for fi, si in enumerate(assign):
        slots[si] = page_features[fi].id
    for off, did in enumerate(dummy_ids):
        slots[n_real + off] = did
    return State(assignment=tuple(slots), page_index=page_index)


def solve_multipage(instance: Instance, alpha: float) -> Labeling:
    """Minimum-cost crossing-free multi-page labeling for the given alpha."""
    if not 0.0 <= alpha <= 1.0:
        raise DataError(f"alpha = {alpha} outside [0, 1]")
    n, k = instance.n, instance.k
    if n == 0:
        raise DataError("instance has no features")
    pages = math.ceil(n / k)
    d = pages * k - n
    dummies = make_dummy_ids(d, [f.id for f in instance.features])

    # Real slots only: the last page's rightmost d ports are reserved for
    # dummies, whose edge weights do not depend on the port anyway.
    real_slots = [
        (i, j)
        for i in range(1, pages + 1)
        for j in range(1, k + 1)
        if not (i == pages and j > k - d)
    ]
    cost = np.zeros((n, n))
    for r, f in enumerate(instance.features):
        for c, (i, j) in enumerate(real_slots):
            cost[r, c] = edge_weight(f, j, i, alpha, instance)
    assign = _matching.min_cost_perfect_matching(cost)

    per_page: List[List[Feature]] = [[] for _ in range(pages)]
    for r, c in enumerate(assign):
        page = real_slots[c][0]
        per_page[page - 1].append(instance.features[r])

    states = []
    for i in range(1, pages + 1):
        page_dummies = dummies if i == pages else ()
        states.append(
            resolve_page_crossings(
                per_page[i - 1], instance, page_index=i, dummy_ids=page_dummies
            )
        )
    return Labeling(
        method="multipage",
        alpha=alpha,
        states=tuple(states),
        dummy_ids=frozenset(dummies),
        optimal=True,
    )
