"""Compiled hot loop for the sliding hill-climbing heuristic.

A sliding labeling is induced by a feature order: state i shows positions
i..i+k-1, position p sitting at port p-i.  A swap of two positions only
touches the states whose windows contain one of them, so each proposal is
scored from the pair contributions involving the two positions.

``hill_climb_reference`` is a pure-Python twin of the compiled kernel with
an identical RNG stream (numba's np.random reproduces numpy's legacy
MT19937); the test suite holds the two paths to bit-identical results.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _pair_term(fx, fy, px, a, b, pa, pb, alpha, binom):
    # Crossing indicator plus clamped inverse vertical distance for features
    # a, b at port indices pa, pb; both normalized by C(k,2).
    ax = fx[a]
    ay = fy[a]
    bx = fx[b]
    by = fy[b]
    pax = px[pa]
    pbx = px[pb]
    lo_a = ax if ax < pax else pax
    hi_a = pax if ax < pax else ax
    lo_b = bx if bx < pbx else pbx
    hi_b = pbx if bx < pbx else bx
    cross = 0.0
    if (lo_a < pbx < hi_a and by < ay) or (lo_b < pax < hi_b and ay < by):
        cross = 1.0
    dist = 0.0
    lo = lo_a if lo_a > lo_b else lo_b
    hi = hi_a if hi_a < hi_b else hi_b
    if lo < hi:
        dy = ay - by
        if dy < 0.0:
            dy = -dy
        if dy < 1.0:
            dy = 1.0
        dist = 1.0 / dy
    return alpha * (cross / binom) + (1.0 - alpha) * (dist / binom)


@njit(cache=True)
def _position_pair_contrib(order, fx, fy, px, k, l, c, d, alpha, binom):
    # Total contribution of position pair c < d over all states covering both.
    lo_i = d - k + 1
    if lo_i < 0:
        lo_i = 0
    hi_i = c if c < l - 1 else l - 1
    a = order[c]
    b = order[d]
    tot = 0.0
    for i in range(lo_i, hi_i + 1):
        tot += _pair_term(fx, fy, px, a, b, c - i, d - i, alpha, binom)
    return tot


@njit(cache=True)
def _affected_cost(order, fx, fy, px, k, l, a, b, alpha, binom):
    # Sum of contributions of all position pairs involving a or b (a < b);
    # the pair (a, b) itself is counted once.
    n = order.shape[0]
    tot = 0.0
    for p in range(2):
        pos = a if p == 0 else b
        u0 = pos - k + 1
        if u0 < 0:
            u0 = 0
        u1 = pos + k
        if u1 > n:
            u1 = n
        for u in range(u0, u1):
            if u == pos:
                continue
            if p == 1 and u == a:
                continue
            c = pos if pos < u else u
            d = u if pos < u else pos
            tot += _position_pair_contrib(order, fx, fy, px, k, l, c, d, alpha, binom)
    return tot


@njit(cache=True)
def _swap_improves(order, fx, fy, px, k, l, a, b, alpha, binom):
    old = _affected_cost(order, fx, fy, px, k, l, a, b, alpha, binom)
    tmp = order[a]
    order[a] = order[b]
    order[b] = tmp
    new = _affected_cost(order, fx, fy, px, k, l, a, b, alpha, binom)
    tmp = order[a]
    order[a] = order[b]
    order[b] = tmp
    return new < old


@njit(cache=True)
def hill_climb(order, fx, fy, px, k, iterations, seed, alpha, pair_a, pair_b, restricted):
    """Run up to ``iterations`` random swap proposals, mutating ``order``.

    Accepts a swap only when it strictly lowers the objective.  After as
    many consecutive rejections as there are eligible pairs, a full
    deterministic pass checks every pair; if none improves, the order is a
    local optimum and the loop stops early.  Returns proposals used.
    """
    n = order.shape[0]
    l = n - k + 1
    binom = k * (k - 1) / 2.0 if k >= 2 else 1.0
    m = pair_a.shape[0]
    if restricted and m == 0:
        return 0
    pair_count = m if restricted else n * (n - 1) // 2
    np.random.seed(seed)
    rejections = 0
    proposals = 0
    while proposals < iterations:
        if restricted:
            idx = np.random.randint(0, m)
            a = pair_a[idx]
            b = pair_b[idx]
        else:
            a = np.random.randint(0, n)
            b = np.random.randint(0, n - 1)
            if b >= a:
                b += 1
        proposals += 1
        if a > b:
            a, b = b, a
        if _swap_improves(order, fx, fy, px, k, l, a, b, alpha, binom):
            tmp = order[a]
            order[a] = order[b]
            order[b] = tmp
            rejections = 0
        else:
            rejections += 1
            if rejections >= pair_count:
                found = False
                if restricted:
                    for idx in range(m):
                        a = pair_a[idx]
                        b = pair_b[idx]
                        if a > b:
                            a, b = b, a
                        if _swap_improves(order, fx, fy, px, k, l, a, b, alpha, binom):
                            found = True
                            break
                else:
                    for a in range(n - 1):
                        for b in range(a + 1, n):
                            if _swap_improves(
                                order, fx, fy, px, k, l, a, b, alpha, binom
                            ):
                                found = True
                                break
                        if found:
                            break
                if not found:
                    break
                rejections = 0
    return proposals


def _pair_term_py(fx, fy, px, a, b, pa, pb, alpha, binom):
    ax, ay, bx, by = fx[a], fy[a], fx[b], fy[b]
    pax, pbx = px[pa], px[pb]
    lo_a = ax if ax < pax else pax
    hi_a = pax if ax < pax else ax
    lo_b = bx if bx < pbx else pbx
    hi_b = pbx if bx < pbx else bx
    cross = 0.0
    if (lo_a < pbx < hi_a and by < ay) or (lo_b < pax < hi_b and ay < by):
        cross = 1.0
    dist = 0.0
    lo = lo_a if lo_a > lo_b else lo_b
    hi = hi_a if hi_a < hi_b else hi_b
    if lo < hi:
        dy = ay - by
        if dy < 0.0:
            dy = -dy
        if dy < 1.0:
            dy = 1.0
        dist = 1.0 / dy
    return alpha * (cross / binom) + (1.0 - alpha) * (dist / binom)


def _affected_cost_py(order, fx, fy, px, k, l, a, b, alpha, binom):
    n = len(order)
    tot = 0.0
    for p in range(2):
        pos = a if p == 0 else b
        for u in range(max(0, pos - k + 1), min(n, pos + k)):
            if u == pos or (p == 1 and u == a):
                continue
            c, d = (pos, u) if pos < u else (u, pos)
            lo_i = max(0, d - k + 1)
            hi_i = min(c, l - 1)
            for i in range(lo_i, hi_i + 1):
                tot += _pair_term_py(
                    fx, fy, px, order[c], order[d], c - i, d - i, alpha, binom
                )
    return tot


def _swap_improves_py(order, fx, fy, px, k, l, a, b, alpha, binom):
    old = _affected_cost_py(order, fx, fy, px, k, l, a, b, alpha, binom)
    order[a], order[b] = order[b], order[a]
    new = _affected_cost_py(order, fx, fy, px, k, l, a, b, alpha, binom)
    order[a], order[b] = order[b], order[a]
    return new < old


def hill_climb_reference(
    order, fx, fy, px, k, iterations, seed, alpha, pair_a, pair_b, restricted
):
    """Pure-Python twin of :func:`hill_climb`; same RNG stream, same result."""
    n = len(order)
    l = n - k + 1
    binom = k * (k - 1) / 2.0 if k >= 2 else 1.0
    m = len(pair_a)
    if restricted and m == 0:
        return 0
    pair_count = m if restricted else n * (n - 1) // 2
    rng = np.random.RandomState(seed)
    rejections = 0
    proposals = 0
    while proposals < iterations:
        if restricted:
            idx = rng.randint(0, m)
            a, b = pair_a[idx], pair_b[idx]
        else:
            a = rng.randint(0, n)
            b = rng.randint(0, n - 1)
            if b >= a:
                b += 1
        proposals += 1
        if a > b:
            a, b = b, a
        if _swap_improves_py(order, fx, fy, px, k, l, a, b, alpha, binom):
            order[a], order[b] = order[b], order[a]
            rejections = 0
        else:
            rejections += 1
            if rejections >= pair_count:
                found = False
                if restricted:
                    for idx in range(m):
                        a, b = pair_a[idx], pair_b[idx]
                        if a > b:
                            a, b = b, a
                        if _swap_improves_py(order, fx, fy, px, k, l, a, b, alpha, binom):
                            found = True
                            break
                else:
                    for a in range(n - 1):
                        if found:
                            break
                        for b in range(a + 1, n):
                            if _swap_improves_py(order, fx, fy, px, k, l, a, b, alpha, binom):
                                found = True
                                break
                if not found:
                    break
                rejections = 0
    return proposals
