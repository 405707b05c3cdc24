"""Independent reference implementations used to verify the solvers.

Everything here recomputes results from first principles (enumeration,
orientation tests, library matchings) and deliberately avoids the code
paths under test.
"""

from __future__ import annotations

import itertools
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from labelkit.costs import cost_slid
from labelkit.model import Feature, Instance, port_positions
from labelkit.sliding import order_to_labeling, weight_groups


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------


def _orient(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def segments_properly_cross(s1, s2) -> bool:
    """Proper crossing: the segments intersect at a point interior to both."""
    (p1, p2), (p3, p4) = s1, s2
    d1 = _orient(*p3, *p4, *p1)
    d2 = _orient(*p3, *p4, *p2)
    d3 = _orient(*p1, *p2, *p3)
    d4 = _orient(*p1, *p2, *p4)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and all(
        d != 0 for d in (d1, d2, d3, d4)
    )


def leader_segments(port, feature, screen_height: float):
    """The horizontal and vertical segment of a leader."""
    px, py = port
    h = ((feature.x, feature.y), (px, feature.y))
    v = ((px, feature.y), (px, screen_height))
    return h, v


def leaders_cross_oracle(l1, l2, screen_height: float) -> bool:
    """Crossing decided by a generic segment-intersection test."""
    h1, v1 = leader_segments(l1[0], l1[1], screen_height)
    h2, v2 = leader_segments(l2[0], l2[1], screen_height)
    return segments_properly_cross(h1, v2) or segments_properly_cross(h2, v1)


# ---------------------------------------------------------------------------
# Matching
# ---------------------------------------------------------------------------


def brute_force_min_assignment(matrix) -> Tuple[float, Tuple[int, ...]]:
    """Exact minimum over all permutations; ties resolved lexicographically."""
    a = [list(map(float, row)) for row in matrix]
    n = len(a)
    best = math.inf
    best_perm: Optional[Tuple[int, ...]] = None
    for perm in itertools.permutations(range(n)):
        s = 0.0
        for i in range(n):
            s += a[i][perm[i]]
        if s < best - 1e-12:
            best = s
            best_perm = perm
        elif abs(s - best) <= 1e-12 and perm < best_perm:
            best_perm = perm
    return best, best_perm


def brute_force_min_total(matrix) -> float:
    """Minimum assignment total only, for speed-sensitive sweeps."""
    a = [tuple(map(float, row)) for row in matrix]
    n = len(a)
    best = math.inf
    for perm in itertools.permutations(range(n)):
        s = 0.0
        for i in range(n):
            s += a[i][perm[i]]
        if s < best:
            best = s
    return best


def scipy_min_assignment_total(matrix) -> float:
    a = np.asarray(matrix, dtype=float)
    ri, ci = linear_sum_assignment(a)
    return float(a[ri, ci].sum())


# ---------------------------------------------------------------------------
# Multi-page enumeration
# ---------------------------------------------------------------------------


def multipage_cost_matrix(instance: Instance, alpha: float) -> np.ndarray:
    """Per-(feature, slot) cost from the raw objective definition."""
    n, k = instance.n, instance.k
    pages = math.ceil(n / k)
    assert pages * k == n, "enumeration oracle expects no padding"
    norm = instance.screen_width + instance.screen_height
    ports = [p[0] for p in port_positions(instance)]
    w = np.zeros((n, n))
    for r, f in enumerate(instance.features):
        for i in range(1, pages + 1):
            for j in range(1, k + 1):
                length = abs(f.x - ports[j - 1]) + (instance.screen_height - f.y)
                w[r, (i - 1) * k + (j - 1)] = (
                    (1.0 - alpha) * (1.0 - f.weight) + alpha * length / norm
                ) / (k * 2.0**i)
    return w


_PERM_CACHE: Dict[int, np.ndarray] = {}


def _all_perms(n: int) -> np.ndarray:
    if n not in _PERM_CACHE:
        _PERM_CACHE[n] = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    return _PERM_CACHE[n]


def multipage_exhaustive_min(instance: Instance, alpha: float) -> float:
    """Minimum objective over every page partition and port assignment.

    A multi-page labeling is exactly a bijection of features onto
    (port, page) slots, so enumerating slot permutations covers them all.
    """
    w = multipage_cost_matrix(instance, alpha)
    n = w.shape[0]
    perms = _all_perms(n)
    totals = w[np.arange(n)[None, :], perms].sum(axis=1)
    return float(totals.min())


# ---------------------------------------------------------------------------
# Sliding enumeration
# ---------------------------------------------------------------------------


def sliding_orders(instance: Instance, hard_c1: bool) -> np.ndarray:
    """All valid orders as rows of feature indices."""
    n = instance.n
    if not hard_c1:
        return _all_perms(n)
    groups = weight_groups(instance)
    per_group = [list(itertools.permutations(g)) for g in groups]
    rows = []
    for combo in itertools.product(*per_group):
        row = []
        for part in combo:
            row.extend(part)
        rows.append(row)
    return np.array(rows, dtype=np.int64)


def _sliding_cost_components(
    orders: np.ndarray, instance: Instance
) -> Tuple[np.ndarray, np.ndarray]:
    """(crossings, raw distance) summed over states for each order row."""
    n, k = instance.n, instance.k
    l = n - k + 1
    fx = np.array([f.x for f in instance.features])
    fy = np.array([f.y for f in instance.features])
    px = np.array([p[0] for p in port_positions(instance)])
    m = orders.shape[0]
    cross = np.zeros(m, dtype=np.int64)
    dist = np.zeros(m)
    for i in range(l):
        for u in range(k):
            for v in range(u + 1, k):
                a = orders[:, i + u]
                b = orders[:, i + v]
                ax, ay, pax = fx[a], fy[a], px[u]
                bx, by, pbx = fx[b], fy[b], px[v]
                lo_a = np.minimum(ax, pax)
                hi_a = np.maximum(ax, pax)
                lo_b = np.minimum(bx, pbx)
                hi_b = np.maximum(bx, pbx)
                c = ((lo_a < pbx) & (pbx < hi_a) & (by < ay)) | (
                    (lo_b < pax) & (pax < hi_b) & (ay < by)
                )
                cross += c.astype(np.int64)
                lo = np.maximum(lo_a, lo_b)
                hi = np.minimum(hi_a, hi_b)
                overlap = lo < hi
                dy = np.abs(ay - by)
                dy = np.maximum(dy, 1.0)
                dist += np.where(overlap, 1.0 / dy, 0.0)
    return cross, dist


def sliding_exhaustive_best(
    instance: Instance, alpha: float, hard_c1: bool
) -> Tuple[float, Tuple[int, ...]]:
    """(min cost, lex-smallest optimal order) by full enumeration.

    A fast vectorized screen narrows the field, then the exact reference
    cost function re-ranks the near-minimal candidates so tie handling
    matches the solver's float semantics.
    """
    orders = sliding_orders(instance, hard_c1)
    k = instance.k
    binom = k * (k - 1) / 2.0 if k >= 2 else 1.0
    cross, dist = _sliding_cost_components(orders, instance)
    approx = alpha * (cross / binom) + (1.0 - alpha) * (dist / binom)
    cutoff = approx.min() + 1e-6
    candidates = np.nonzero(approx <= cutoff)[0]
    ids = [f.id for f in instance.features]
    best_cost = math.inf
    best_order: Optional[Tuple[int, ...]] = None
    for row in candidates:
        idxs = tuple(int(i) for i in orders[row])
        lab = order_to_labeling([ids[i] for i in idxs], instance, alpha=alpha)
        c = cost_slid(lab, instance, alpha)
        if c < best_cost or (c == best_cost and idxs < best_order):
            best_cost = c
            best_order = idxs
    return best_cost, best_order


def sliding_exhaustive_worst(
    instance: Instance, alpha: float, hard_c1: bool
) -> float:
    orders = sliding_orders(instance, hard_c1)
    k = instance.k
    binom = k * (k - 1) / 2.0 if k >= 2 else 1.0
    cross, dist = _sliding_cost_components(orders, instance)
    approx = alpha * (cross / binom) + (1.0 - alpha) * (dist / binom)
    cutoff = approx.max() - 1e-6
    candidates = np.nonzero(approx >= cutoff)[0]
    ids = [f.id for f in instance.features]
    best = -math.inf
    for row in candidates:
        lab = order_to_labeling([ids[int(i)] for i in orders[row]], instance, alpha=alpha)
        best = max(best, cost_slid(lab, instance, alpha))
    return best


# ---------------------------------------------------------------------------
# Pages and stacks
# ---------------------------------------------------------------------------


def page_brute_force_min_length(
    features: Sequence[Feature], port_xs: Sequence[float], screen_height: float
) -> float:
    """Minimum total leader length over all port permutations of one page."""
    best = math.inf
    for perm in itertools.permutations(range(len(port_xs))):
        total = 0.0
        for fi, si in enumerate(perm):
            f = features[fi]
            total += abs(f.x - port_xs[si]) + (screen_height - f.y)
        best = min(best, total)
    return best


def stacking_matching_total(instance: Instance) -> float:
    """Minimum total leader length over the replicated-port slot set,
    computed as a (possibly rectangular) min-cost matching."""
    n, k = instance.n, instance.k
    depth = math.ceil(n / k)
    ports = [p[0] for p in port_positions(instance)]
    slot_xs = [ports[j] for j in range(k) for _ in range(depth)]
    cost = np.zeros((n, len(slot_xs)))
    for i, f in enumerate(instance.features):
        for j, sx in enumerate(slot_xs):
            cost[i, j] = abs(f.x - sx) + (instance.screen_height - f.y)
    ri, ci = linear_sum_assignment(cost)
    return float(cost[ri, ci].sum())


def stack_total_length(instance: Instance, stacks) -> float:
    ports = [p[0] for p in port_positions(instance)]
    fmap = instance.feature_map()
    total = 0.0
    for j, stack in enumerate(stacks.stacks):
        for fid in stack:
            if fid in stacks.dummy_ids:
                continue
            f = fmap[fid]
            total += abs(f.x - ports[j]) + (instance.screen_height - f.y)
    return total


def all_stack_leaders(instance: Instance, stacks) -> List[Tuple[int, Feature]]:
    """(port index, feature) for every real entry of every stack."""
    fmap = instance.feature_map()
    out = []
    for j, stack in enumerate(stacks.stacks):
        for fid in stack:
            if fid not in stacks.dummy_ids:
                out.append((j, fmap[fid]))
    return out


def crossing_free_same_port_exempt(instance: Instance, stacks) -> bool:
    ports = [p[0] for p in port_positions(instance)]
    leaders = all_stack_leaders(instance, stacks)
    h = instance.screen_height
    for (j1, f1), (j2, f2) in itertools.combinations(leaders, 2):
        if j1 == j2:
            continue
        if leaders_cross_oracle(
            ((ports[j1], h), f1), ((ports[j2], h), f2), h
        ):
            return False
    return True
