"""Stacking boundary labelings and the crossing-free assignment sweep.

The core primitive assigns features to a multiset of port slots on the
bottom edge so that total leader length is minimal and no two leaders from
different ports properly cross.  It is the classic strip sweep for
one-sided boundary labeling: vertical lines through every feature and slot
cut the viewport into strips, each strip carries leaders in one direction
only, and a directional sweep hands each slot the lowest candidate feature.

Total leader length decomposes into a fixed vertical part (every feature
must reach the bottom edge) plus the horizontal part sum |fx - sx|, so the
in-order matching of x-sorted features to x-sorted slots is length-minimal;
the sweep realizes an equal-length crossing-free assignment of it.
"""

from __future__ import annotations

import heapq
import math
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DataError
from .model import (
    Feature,
    Instance,
    Labeling,
    StackSet,
    State,
    make_dummy_ids,
    port_positions,
)


def crossing_free_min_length_assignment(
    features: Sequence[Feature], slot_xs: Sequence[float]
) -> List[int]:
    """Assign each feature one slot; returns slot index per feature.

    Requires len(features) == len(slot_xs).  The result minimizes the total
    leader length and is crossing-free when slots at distinct x belong to
    distinct ports (slots sharing an x are exempt from crossing anyway).
    Ties between equal-height features are broken by feature id.
    """
    if len(features) != len(slot_xs):
        raise DataError(
            f"{len(features)} features vs {len(slot_xs)} slots: counts must match"
        )
    # Events sorted by x; slots sort before features at equal x so balanced
    # blocks close as early as possible.
    events: List[Tuple[float, int, int]] = []
    for si, sx in enumerate(slot_xs):
        events.append((sx, 0, si))
    for fi, f in enumerate(features):
        events.append((f.x, 1, fi))
    events.sort(key=lambda e: (e[0], e[1], _event_tiebreak(e, features)))

    out = [-1] * len(features)
    block: List[Tuple[float, int, int]] = []
    counter = 0
    for ev in events:
        block.append(ev)
        counter += 1 if ev[1] == 1 else -1
        if counter == 0:
            _sweep_block(block, features, out)
            block = []
    if block:
        raise DataError("unbalanced feature/slot events")
    return out


def _event_tiebreak(event, features):
    x, kind, idx = event
    if kind == 1:
        return features[idx].id
    return str(idx)


def _sweep_block(block, features, out):
    # A balanced block is wholly rightward (features first, leaders point
    # right) or leftward; sweep along the leader direction, collecting
    # features and popping the lowest (largest screen y) at each slot.
    rightward = block[0][1] == 1
    seq = block if rightward else reversed(block)
    heap: List[Tuple[float, str, int]] = []
    for x, kind, idx in seq:
        if kind == 1:
            f = features[idx]
            heapq.heappush(heap, (-f.y, f.id, idx))
        else:
            if not heap:
                raise AssertionError("sweep block ran out of candidate features")
            _, _, fi = heapq.heappop(heap)
            out[fi] = idx
    if heap:
        raise AssertionError("sweep block left features unassigned")


def _choose_slot_subset(
    sorted_fx: Sequence[float], sorted_slot_xs: Sequence[float]
) -> List[int]:
    """Pick len(sorted_fx) slots (indices into the sorted slot list) so an
    in-order matching has minimal horizontal length.  Monotone DP."""
    n, m = len(sorted_fx), len(sorted_slot_xs)
    INF = math.inf
    dp = [[INF] * (m + 1) for _ in range(n + 1)]
    for j in range(m + 1):
        dp[0][j] = 0.0
    for i in range(1, n + 1):
        row = dp[i]
        prev = dp[i - 1]
        for j in range(i, m + 1):
            skip = row[j - 1]
            take = prev[j - 1] + abs(sorted_fx[i - 1] - sorted_slot_xs[j - 1])
            row[j] = take if take < skip else skip
    used: List[int] = []
    i, j = n, m
    while i > 0:
        if j > i and dp[i][j] == dp[i][j - 1]:
            j -= 1
        else:
            used.append(j - 1)
            i -= 1
            j -= 1
    used.reverse()
    return used


def solve_stacking(instance: Instance) -> StackSet:
    """Partition the features into k stacks of depth ceil(n/k).

    The union of all leaders (each port replicated once per stack slot) is
    crossing-free under the same-port exemption and the total leader length
    is minimal over all such partitions.  When n is not divisible by k,
    padding entries fill the cheapest-to-skip slots and sink to the stack
    bottoms.
    """
    n, k = instance.n, instance.k
    if n == 0:
        raise DataError("instance has no features")
    depth = math.ceil(n / k)
    d = depth * k - n
    ports = port_positions(instance)

    # Slot list sorted by x (ports are already left-to-right).
    slots: List[Tuple[float, int]] = []  # (x, port j)
    for j in range(k):
        for _ in range(depth):
            slots.append((ports[j][0], j))

    feats = list(instance.features)
    if d > 0:
        feats_sorted = sorted(feats, key=lambda f: (f.x, f.id))
        used = _choose_slot_subset(
            [f.x for f in feats_sorted], [s[0] for s in slots]
        )
        chosen = [slots[i] for i in used]
        assign = crossing_free_min_length_assignment(
            feats_sorted, [s[0] for s in chosen]
        )
        port_of = {
            feats_sorted[fi].id: chosen[si][1] for fi, si in enumerate(assign)
        }
        pop_order = {f.id: i for i, f in enumerate(feats_sorted)}
    else:
        assign = crossing_free_min_length_assignment(feats, [s[0] for s in slots])
        port_of = {feats[fi].id: slots[si][1] for fi, si in enumerate(assign)}
        pop_order = {f.id: i for i, f in enumerate(feats)}

    per_port: List[List[str]] = [[] for _ in range(k)]
    for f in sorted(feats, key=lambda f: pop_order[f.id]):
        per_port[port_of[f.id]].append(f.id)

    dummies = make_dummy_ids(d, [f.id for f in feats])
    di = iter(dummies)
    stacks = []
    for j in range(k):
        stack = list(per_port[j])
        while len(stack) < depth:
            stack.append(next(di))
        stacks.append(tuple(stack))
    return StackSet(stacks=tuple(stacks), dummy_ids=frozenset(dummies))


def sort_stacks_by_weight(stacks: StackSet, instance: Instance) -> StackSet:
    """Reorder each stack by non-increasing weight, ties by (x, y, id).

    Padding entries sink to the bottom.  The leader multiset per port is
    unchanged, so the total leader length is exactly preserved.
    """
    fmap = instance.feature_map()
    out = []
    for stack in stacks.stacks:
        real = [fid for fid in stack if fid not in stacks.dummy_ids]
        pads = [fid for fid in stack if fid in stacks.dummy_ids]
        real.sort(key=lambda fid: (-fmap[fid].weight, fmap[fid].x, fmap[fid].y, fid))
        out.append(tuple(real + pads))
    return StackSet(stacks=tuple(out), dummy_ids=stacks.dummy_ids)


def stacks_to_pages(stacks: StackSet, alpha: float = 0.0) -> Labeling:
    """Interpret a stack set as a multi-page-shaped labeling.

    State i attaches the i-th entry of every stack to that stack's port.
    """
    states = []
    for i in range(stacks.depth):
        states.append(
            State(
                assignment=tuple(stack[i] for stack in stacks.stacks),
                page_index=i + 1,
            )
        )
    return Labeling(
        method="stacking",
        alpha=alpha,
        states=tuple(states),
        dummy_ids=stacks.dummy_ids,
        optimal=True,
        stacks=stacks,
    )


def pop_stack(stacks: StackSet, port_index: int) -> StackSet:
    """Rotate stack ``port_index`` (1-based) by one: top goes to the bottom."""
    if not 1 <= port_index <= stacks.k:
        raise DataError(f"port index {port_index} outside 1..{stacks.k}")
    j = port_index - 1
    out = list(stacks.stacks)
    s = out[j]
    if len(s) > 1:
        out[j] = s[1:] + (s[0],)
    return StackSet(stacks=tuple(out), dummy_ids=stacks.dummy_ids)
