"""Sliding boundary labelings: exact order search and hill-climbing heuristic.

A sliding labeling is fully determined by a feature order: the labels march
one port leftward per step, so state i shows the order's positions
i..i+k-1.  The exact solver searches feature orderings depth-first with an
admissible bound (per-state costs are nonnegative and each state is fixed
once its window is), optionally restricted to non-increasing weight orders
(the hard-C1 variant, where only equal-weight features may trade places).
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .errors import BudgetExceededError, DataError
from .model import Feature, Instance, Labeling, State, port_positions

DEFAULT_ITERATIONS = 5000


@dataclass(frozen=True)
class SlidingOrder:
    """A feature order inducing a sliding labeling."""

    order: Tuple[str, ...]
    hard_c1: bool = False


@dataclass(frozen=True)
class Budget:
    """Limits for the exact searches."""

    node_limit: int = 10_000_000
    time_limit: float = 30.0
    exact_size_cap: int = 9


def is_valid_transition(s: State, t: State) -> bool:
    """True iff t shifts s one port left and a fresh label enters rightmost."""
    k = s.k
    if t.k != k:
        return False
    for j in range(1, k):
        if s.assignment[j] != t.assignment[j - 1]:
            return False
    return s.assignment[0] != t.assignment[k - 1]


def order_to_labeling(
    order,
    instance: Instance,
    alpha: float = 0.0,
    optimal: bool = True,
) -> Labeling:
    """Expand an order into its n-k+1 sliding states."""
    hard_c1 = False
    if isinstance(order, SlidingOrder):
        hard_c1 = order.hard_c1
        ids = list(order.order)
    else:
        ids = list(order)
    n, k = instance.n, instance.k
    if n < k:
        raise DataError("instance smaller than port count")
    if sorted(ids) != sorted(f.id for f in instance.features):
        raise DataError("order is not a permutation of the instance features")
    if hard_c1:
        fmap = instance.feature_map()
        weights = [fmap[fid].weight for fid in ids]
        if any(weights[i] < weights[i + 1] for i in range(len(weights) - 1)):
            raise DataError("hard-C1 order must have non-increasing weights")
    states = tuple(
        State(assignment=tuple(ids[i : i + k]), page_index=i + 1)
        for i in range(n - k + 1)
    )
    return Labeling(
        method="sliding",
        alpha=alpha,
        states=states,
        dummy_ids=frozenset(),
        optimal=optimal,
    )


def first_fit_order(instance: Instance) -> List[str]:
    """Deterministic initial order: descending weight, ties by (x, y, id)."""
    feats = sorted(instance.features, key=lambda f: (-f.weight, f.x, f.y, f.id))
    return [f.id for f in feats]


def weight_groups(instance: Instance) -> List[List[int]]:
    """Feature indices grouped by equal weight, groups in descending weight
    order, members in instance-position order."""
    by_weight: Dict[float, List[int]] = {}
    for idx, f in enumerate(instance.features):
        by_weight.setdefault(f.weight, []).append(idx)
    return [by_weight[w] for w in sorted(by_weight, reverse=True)]


def _geometry(instance: Instance):
    fx = np.array([f.x for f in instance.features])
    fy = np.array([f.y for f in instance.features])
    px = np.array([p[0] for p in port_positions(instance)])
    return fx, fy, px


def _state_term(
    window: Sequence[int],
    fx: np.ndarray,
    fy: np.ndarray,
    px: np.ndarray,
    alpha: float,
    binom: float,
) -> float:
    """alpha * c_C + (1-alpha) * c_D of one state given feature indices.

    Mirrors the reference cost functions term for term so that sequential
    accumulation over states reproduces cost_slid exactly.
    """
    k = len(window)
    if k < 2:
        return 0.0
    cross = 0
    dist_raw = 0.0
    for u in range(k):
        a = window[u]
        ax, ay, pax = fx[a], fy[a], px[u]
        lo_a = ax if ax < pax else pax
        hi_a = pax if ax < pax else ax
        for v in range(u + 1, k):
            b = window[v]
            bx, by, pbx = fx[b], fy[b], px[v]
            lo_b = bx if bx < pbx else pbx
            hi_b = pbx if bx < pbx else bx
            if (lo_a < pbx < hi_a and by < ay) or (lo_b < pax < hi_b and ay < by):
                cross += 1
            lo = lo_a if lo_a > lo_b else lo_b
            hi = hi_a if hi_a < hi_b else hi_b
            if lo < hi:
                dy = ay - by
                if dy < 0.0:
                    dy = -dy
                if dy < 1.0:
                    dy = 1.0
                dist_raw += 1.0 / dy
    return alpha * (cross / binom) + (1.0 - alpha) * (dist_raw / binom)


class _SearchStop(Exception):
    pass


def _search_orders(
    instance: Instance,
    term: Callable[[Sequence[int]], float],
    future_per_state: float,
    groups: Optional[List[List[int]]],
    budget: Budget,
) -> Tuple[Optional[float], Optional[List[int]], bool]:
    """Depth-first search over feature orders minimizing the summed term.

    Candidates are tried in instance-position order, so the first optimum
    found (and kept, since ties never replace it) is the lexicographically
    smallest.  ``future_per_state`` is an admissible per-remaining-state
    lower bound (0 for minimization, -1 for the negated maximization).
    Returns (best_cost, best_order, completed).
    """
    n, k = instance.n, instance.k
    l = n - k + 1
    best_cost: Optional[float] = None
    best_order: Optional[List[int]] = None
    order: List[int] = []
    used = [False] * n
    group_of: Optional[List[int]] = None
    remaining_in_group: Optional[List[int]] = None
    if groups is not None:
        group_of = [0] * n
        for gi, members in enumerate(groups):
            for idx in members:
                group_of[idx] = gi
        remaining_in_group = [len(g) for g in groups]
    nodes = 0
    deadline = time.monotonic() + budget.time_limit

    def candidates(depth: int):
        if groups is None:
            return (i for i in range(n) if not used[i])
        gi = 0
        while remaining_in_group[gi] == 0:
            gi += 1
        return (i for i in groups[gi] if not used[i])

    def rec(depth: int, acc: float):
        nonlocal best_cost, best_order, nodes
        if depth == n:
            if best_cost is None or acc < best_cost:
                best_cost = acc
                best_order = order.copy()
            return
        states_done = max(0, depth - k + 1)
        for cand in candidates(depth):
            nodes += 1
            if nodes > budget.node_limit:
                raise _SearchStop()
            if nodes % 4096 == 0 and time.monotonic() > deadline:
                raise _SearchStop()
            order.append(cand)
            used[cand] = True
            if remaining_in_group is not None:
                remaining_in_group[group_of[cand]] -= 1
            new_acc = acc
            if depth + 1 >= k:
                new_acc = acc + term(order[depth + 1 - k : depth + 1])
            remaining = l - max(0, depth + 1 - k + 1)
            bound = new_acc + remaining * future_per_state
            if best_cost is None or bound < best_cost:
                rec(depth + 1, new_acc)
            if remaining_in_group is not None:
                remaining_in_group[group_of[cand]] += 1
            used[cand] = False
            order.pop()

    completed = True
    try:
        rec(0, 0.0)
    except _SearchStop:
        completed = False
    return best_cost, best_order, completed


def _hard_c1_leaf_bound(instance: Instance) -> float:
    return math.prod(math.factorial(len(g)) for g in weight_groups(instance))


def _solve_exact_impl(
    instance: Instance,
    alpha: float,
    hard_c1: bool,
    budget: Budget,
    maximize: bool,
    out_alpha: float,
) -> Labeling:
    n, k = instance.n, instance.k
    if n < k:
        raise DataError("instance smaller than port count")
    if not 0.0 <= alpha <= 1.0:
        raise DataError(f"alpha = {alpha} outside [0, 1]")
    groups = weight_groups(instance) if hard_c1 else None

    feasible = (
        _hard_c1_leaf_bound(instance) <= budget.node_limit
        if hard_c1
        else n <= budget.exact_size_cap
    )
    ids = [f.id for f in instance.features]
    if not feasible:
        raise BudgetExceededError(
            "budget exceeded: instance too large for the exact search "
            f"(n={n}, hard_c1={hard_c1}); incumbent is the first-fit order",
            incumbent=order_to_labeling(
                first_fit_order(instance), instance, alpha=out_alpha, optimal=False
            ),
        )

    fx_a, fy_a, px_a = _geometry(instance)
    fx, fy, px = fx_a.tolist(), fy_a.tolist(), px_a.tolist()
    binom = k * (k - 1) / 2.0 if k >= 2 else 1.0
    if maximize:
        term = lambda w: -_state_term(w, fx, fy, px, alpha, binom)
        future = -1.0
    else:
        term = lambda w: _state_term(w, fx, fy, px, alpha, binom)
        future = 0.0

    best_cost, best_order, completed = _search_orders(
        instance, term, future, groups, budget
    )
    if best_order is None:
        raise BudgetExceededError(
            "budget exceeded before any complete labeling was found",
            incumbent=order_to_labeling(
                first_fit_order(instance), instance, alpha=out_alpha, optimal=False
            ),
        )
    labeling = order_to_labeling(
        [ids[i] for i in best_order],
        instance,
        alpha=out_alpha,
        optimal=completed,
    )
    if not completed:
        raise BudgetExceededError(
            "budget exceeded: returning the best incumbent", incumbent=labeling
        )
    return labeling


def solve_sliding_exact(
    instance: Instance,
    alpha: float,
    hard_c1: bool = False,
    budget: Optional[Budget] = None,
) -> Labeling:
    """Minimum-cost sliding labeling over all valid orders.

    Restricted to descending-weight orders when ``hard_c1``.  Deterministic
    tie-break: the lexicographically smallest order (by instance position).
    Raises :class:`BudgetExceededError` carrying the best incumbent when the
    search budget runs out.
    """
    budget = budget or Budget()
    return _solve_exact_impl(instance, alpha, hard_c1, budget, False, alpha)


def max_cost_sliding(
    instance: Instance,
    criterion: str,
    hard_c1: bool = False,
    budget: Optional[Budget] = None,
) -> Labeling:
    """Worst-case baseline: maximize the crossing (C2) or distance (C3) cost."""
    budget = budget or Budget()
    if criterion == "C2":
        alpha = 1.0
    elif criterion == "C3":
        alpha = 0.0
    else:
        raise DataError(f"criterion must be 'C2' or 'C3', got {criterion!r}")
    return _solve_exact_impl(instance, alpha, hard_c1, budget, True, alpha)


def solve_sliding_heuristic(
    instance: Instance,
    alpha: float,
    hard_c1: bool = False,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
) -> Labeling:
    """Hill climbing from the first-fit order.

    Each proposal swaps two uniformly random positions (confined to one
    equal-weight group when ``hard_c1``) and keeps the swap only if the
    objective strictly improves.  Stops after ``iterations`` proposals or
    once a full pass proves no improving swap exists.  Reproducible for a
    fixed (instance, alpha, iterations, seed).
    """
    n, k = instance.n, instance.k
    if n < k:
        raise DataError("instance smaller than port count")
    if not 0.0 <= alpha <= 1.0:
        raise DataError(f"alpha = {alpha} outside [0, 1]")
    if iterations < 0:
        raise DataError("iterations must be >= 0")
    ids = first_fit_order(instance)
    idx_of = {f.id: i for i, f in enumerate(instance.features)}
    order = np.array([idx_of[fid] for fid in ids], dtype=np.int64)
    fx, fy, px = _geometry(instance)

    if hard_c1:
        pair_a, pair_b = _group_position_pairs(instance, ids)
        restricted = True
    else:
        pair_a = np.empty(0, dtype=np.int64)
        pair_b = np.empty(0, dtype=np.int64)
        restricted = False

    if iterations > 0:
        _kernels.hill_climb(
            order, fx, fy, px, k, iterations, seed, alpha, pair_a, pair_b, restricted
        )
    final_ids = [instance.features[i].id for i in order]
    return order_to_labeling(final_ids, instance, alpha=alpha, optimal=False)


def _group_position_pairs(instance: Instance, ffo: List[str]):
    """Swappable position pairs under hard-C1: positions holding equal
    weights.  In the first-fit order each weight group occupies a contiguous
    position range, and swaps never move a feature out of its group's range."""
    fmap = instance.feature_map()
    pairs_a: List[int] = []
    pairs_b: List[int] = []
    start = 0
    n = len(ffo)
    while start < n:
        end = start
        w = fmap[ffo[start]].weight
        while end < n and fmap[ffo[end]].weight == w:
            end += 1
        for i in range(start, end):
            for j in range(i + 1, end):
                pairs_a.append(i)
                pairs_b.append(j)
        start = end
    return (
        np.array(pairs_a, dtype=np.int64),
        np.array(pairs_b, dtype=np.int64),
    )


def random_sliding_baseline(
    instance: Instance, hard_c1: bool = False, seed: int = 0
) -> Labeling:
    """Uniform random order; uniform within weight groups when ``hard_c1``."""
    if instance.n < instance.k:
        raise DataError("instance smaller than port count")
    rng = random.Random(seed)
    if hard_c1:
        groups = weight_groups(instance)
        ids: List[str] = []
        for members in groups:
            members = [instance.features[i].id for i in members]
            rng.shuffle(members)
            ids.extend(members)
    else:
        ids = [f.id for f in instance.features]
        rng.shuffle(ids)
    return order_to_labeling(ids, instance, alpha=0.0, optimal=False)
