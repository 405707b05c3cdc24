"""The four per-state criteria costs and the composite objectives.

Each state of a labeling is rated separately and the labeling cost is the
sum over its states.  Page discounting: weight and leader costs of state i
carry a 1/2^i factor, so early states dominate.

Conventions baked in here:
  - k = 1 has no leader pairs, so crossing and distance costs are 0.
  - Near-equal feature heights clamp the distance denominator at
    EPSILON_Y = 1 px (the display resolution floor).
  - Horizontal-span overlap uses open intervals: touching endpoints do not
    count as running above each other.
  - Padding (dummy) features contribute weight 0 to the weight cost, 0 to
    the leader cost, and are excluded from crossing/distance pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, FrozenSet

from .errors import DataError
from .model import Instance, Labeling, State, port_positions

EPSILON_Y = 1.0

_NO_DUMMIES: FrozenSet[str] = frozenset()


@dataclass(frozen=True)
class StateCosts:
    c_w: float
    c_c: float
    c_d: float
    c_l: float
    cross_count: int


def weight_cost(
    state: State,
    instance: Instance,
    dummy_ids: AbstractSet[str] = _NO_DUMMIES,
    exclude_dummies: bool = False,
) -> float:
    """(1 / (k * 2^i)) * sum over ports of (1 - weight).

    Dummies count as weight 0 unless ``exclude_dummies`` drops their terms.
    """
    k = instance.k
    i = state.page_index
    weights = {f.id: f.weight for f in instance.features}
    total = 0.0
    for fid in state.assignment:
        if fid in dummy_ids:
            if not exclude_dummies:
                total += 1.0
        else:
            total += 1.0 - weights[fid]
    return total / (k * 2.0**i)


def leader_cost(
    state: State,
    instance: Instance,
    dummy_ids: AbstractSet[str] = _NO_DUMMIES,
) -> float:
    """(1 / (k * 2^i)) * sum of leader lengths / (screen width + height)."""
    k = instance.k
    i = state.page_index
    norm = instance.screen_width + instance.screen_height
    fmap = instance.feature_map()
    ports = port_positions(instance)
    total = 0.0
    for j, fid in enumerate(state.assignment):
        if fid in dummy_ids:
            continue
        f = fmap[fid]
        px, py = ports[j]
        total += (abs(f.x - px) + (py - f.y)) / norm
    return total / (k * 2.0**i)


def _pair_geometry(state: State, instance: Instance, dummy_ids: AbstractSet[str]):
    """Yield (fx, fy, px) per non-dummy port of the state, in port order."""
    fmap = instance.feature_map()
    ports = port_positions(instance)
    out = []
    for j, fid in enumerate(state.assignment):
        if fid in dummy_ids:
            continue
        f = fmap[fid]
        out.append((f.x, f.y, ports[j][0]))
    return out


def cross_count(
    state: State,
    instance: Instance,
    dummy_ids: AbstractSet[str] = _NO_DUMMIES,
) -> int:
    """Number of unordered leader pairs of the state that properly cross."""
    geo = _pair_geometry(state, instance, dummy_ids)
    count = 0
    for a in range(len(geo)):
        f1x, f1y, p1x = geo[a]
        for b in range(a + 1, len(geo)):
            f2x, f2y, p2x = geo[b]
            lo1 = f1x if f1x < p1x else p1x
            hi1 = p1x if f1x < p1x else f1x
            lo2 = f2x if f2x < p2x else p2x
            hi2 = p2x if f2x < p2x else f2x
            if (lo1 < p2x < hi1 and f2y < f1y) or (lo2 < p1x < hi2 and f1y < f2y):
                count += 1
    return count


def crossing_cost(
    state: State,
    instance: Instance,
    dummy_ids: AbstractSet[str] = _NO_DUMMIES,
) -> float:
    """Crossing count normalized by C(k, 2); 0 for single-port instances."""
    k = instance.k
    if k < 2:
        return 0.0
    binom = k * (k - 1) / 2.0
    return cross_count(state, instance, dummy_ids) / binom


def distance_raw(
    state: State,
    instance: Instance,
    dummy_ids: AbstractSet[str] = _NO_DUMMIES,
) -> float:
    """Unnormalized distance cost: sum of 1/max(|dy|, EPSILON_Y) over pairs
    whose horizontal spans overlap in an open interval of positive length."""
    geo = _pair_geometry(state, instance, dummy_ids)
    total = 0.0
    for a in range(len(geo)):
        f1x, f1y, p1x = geo[a]
        lo1 = f1x if f1x < p1x else p1x
        hi1 = p1x if f1x < p1x else f1x
        for b in range(a + 1, len(geo)):
            f2x, f2y, p2x = geo[b]
            lo2 = f2x if f2x < p2x else p2x
            hi2 = p2x if f2x < p2x else f2x
            lo = lo1 if lo1 > lo2 else lo2
            hi = hi1 if hi1 < hi2 else hi2
            if lo < hi:
                dy = f1y - f2y
                if dy < 0:
                    dy = -dy
                if dy < EPSILON_Y:
                    dy = EPSILON_Y
                total += 1.0 / dy
    return total


def distance_cost(
    state: State,
    instance: Instance,
    dummy_ids: AbstractSet[str] = _NO_DUMMIES,
) -> float:
    """Distance cost normalized by C(k, 2); 0 for single-port instances."""
    k = instance.k
    if k < 2:
        return 0.0
    binom = k * (k - 1) / 2.0
    return distance_raw(state, instance, dummy_ids) / binom


def state_costs(
    state: State,
    instance: Instance,
    dummy_ids: AbstractSet[str] = _NO_DUMMIES,
) -> StateCosts:
    return StateCosts(
        c_w=weight_cost(state, instance, dummy_ids),
        c_c=crossing_cost(state, instance, dummy_ids),
        c_d=distance_cost(state, instance, dummy_ids),
        c_l=leader_cost(state, instance, dummy_ids),
        cross_count=cross_count(state, instance, dummy_ids),
    )


def cost_mpl(labeling: Labeling, instance: Instance, alpha: float) -> float:
    """alpha * leader cost + (1 - alpha) * weight cost, summed over states."""
    if not 0.0 <= alpha <= 1.0:
        raise DataError(f"alpha = {alpha} outside [0, 1]")
    total = 0.0
    for s in labeling.states:
        total += alpha * leader_cost(s, instance, labeling.dummy_ids) + (
            1.0 - alpha
        ) * weight_cost(s, instance, labeling.dummy_ids)
    return total


def cost_slid(labeling: Labeling, instance: Instance, alpha: float) -> float:
    """alpha * crossing cost + (1 - alpha) * distance cost, summed over states."""
    if not 0.0 <= alpha <= 1.0:
        raise DataError(f"alpha = {alpha} outside [0, 1]")
    total = 0.0
    for s in labeling.states:
        total += alpha * crossing_cost(s, instance, labeling.dummy_ids) + (
            1.0 - alpha
        ) * distance_cost(s, instance, labeling.dummy_ids)
    return total


def relative_cost(cost: float, reference_cost: float) -> float:
    """Percentage excess of ``cost`` over ``reference_cost``.

    Negative when the labeling beats the reference.
    """
    if reference_cost == 0.0:
        raise DataError("reference cost zero")
    return (cost - reference_cost) / reference_cost * 100.0


def total_weight_cost(labeling: Labeling, instance: Instance) -> float:
    return sum(weight_cost(s, instance, labeling.dummy_ids) for s in labeling.states)


def total_crossing_cost(labeling: Labeling, instance: Instance) -> float:
    return sum(crossing_cost(s, instance, labeling.dummy_ids) for s in labeling.states)


def total_distance_cost(labeling: Labeling, instance: Instance) -> float:
    return sum(distance_cost(s, instance, labeling.dummy_ids) for s in labeling.states)


def total_leader_cost(labeling: Labeling, instance: Instance) -> float:
    return sum(leader_cost(s, instance, labeling.dummy_ids) for s in labeling.states)


def total_cross_count(labeling: Labeling, instance: Instance) -> int:
    return sum(cross_count(s, instance, labeling.dummy_ids) for s in labeling.states)


def vertical_gaps(
    state: State,
    instance: Instance,
    dummy_ids: AbstractSet[str] = _NO_DUMMIES,
) -> list:
    """|dy| of every pair whose horizontal spans overlap (the H set)."""
    geo = _pair_geometry(state, instance, dummy_ids)
    gaps = []
    for a in range(len(geo)):
        f1x, f1y, p1x = geo[a]
        lo1 = f1x if f1x < p1x else p1x
        hi1 = p1x if f1x < p1x else f1x
        for b in range(a + 1, len(geo)):
            f2x, f2y, p2x = geo[b]
            lo2 = f2x if f2x < p2x else p2x
            hi2 = p2x if f2x < p2x else f2x
            lo = lo1 if lo1 > lo2 else lo2
            hi = hi1 if hi1 < hi2 else hi2
            if lo < hi:
                gaps.append(abs(f1y - f2y))
    return gaps
