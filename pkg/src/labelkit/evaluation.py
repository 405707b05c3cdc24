"""Evaluation harness: alpha sweeps, baseline comparisons, and benchmarks.

Workloads fan out per instance; set LABELKIT_THREADS > 1 to run instance
cells in a process pool.  Results are assembled in submission order, so the
output is identical either way.
"""

from __future__ import annotations

import math
import os
import platform
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .costs import (
    cost_slid,
    relative_cost,
    total_cross_count,
    total_crossing_cost,
    total_distance_cost,
    total_leader_cost,
    total_weight_cost,
    vertical_gaps,
)
from .errors import BudgetExceededError, DataError
from .model import Instance, Labeling
from .multipage import solve_multipage
from .sliding import (
    Budget,
    first_fit_order,
    max_cost_sliding,
    order_to_labeling,
    random_sliding_baseline,
    solve_sliding_exact,
    solve_sliding_heuristic,
)
from .stacking import solve_stacking, sort_stacks_by_weight, stacks_to_pages
from .synth import generate_instance

ALPHA_GRID: Tuple[float, ...] = tuple(i / 40.0 for i in range(41))
EVAL_ALPHAS: Tuple[float, ...] = (0.0, 0.5, 1.0)
HIST_ALPHAS: Tuple[float, ...] = (0.0, 0.105, 1.0)
HIST_RANGE_PX = 50
SMALL_GAP_PX = 5.0


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("LABELKIT_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _mean_std(values: Sequence[float]) -> Tuple[float, float]:
    if not values:
        return math.nan, math.nan
    if len(values) == 1:
        return values[0], 0.0
    return statistics.fmean(values), statistics.stdev(values)


# ---------------------------------------------------------------------------
# Alpha sweep
# ---------------------------------------------------------------------------


@dataclass
class SweepReport:
    """Relative-cost curves against the two endpoint optima.

    For multipage the deltas are (weight vs alpha=0, leader vs alpha=1);
    for sliding they are (crossing vs alpha=1, distance vs alpha=0).
    ``delta_a/delta_b`` hold per-instance curves indexed [instance][alpha],
    None where the reference cost was zero.
    """

    method: str
    alphas: Tuple[float, ...]
    delta_a: List[List[Optional[float]]]
    delta_b: List[List[Optional[float]]]
    labels: Tuple[str, str]

    def aggregate_rows(self) -> List[dict]:
        rows = []
        for ai, alpha in enumerate(self.alphas):
            row = {"alpha": alpha}
            for name, data in ((self.labels[0], self.delta_a), (self.labels[1], self.delta_b)):
                vals = [inst[ai] for inst in data if inst[ai] is not None]
                mean, std = _mean_std(vals)
                row[f"{name}_mean"] = mean
                row[f"{name}_std"] = std
                row[f"{name}_count"] = len(vals)
            rows.append(row)
        return rows

    def crossing_alpha(self) -> Optional[float]:
        """First alpha where the two mean curves cross, None if they never do."""
        rows = self.aggregate_rows()
        a, b = self.labels
        prev = None
        for row in rows:
            diff = row[f"{a}_mean"] - row[f"{b}_mean"]
            if prev is not None and (prev < 0) != (diff < 0):
                return row["alpha"]
            prev = diff
        return None


def _multipage_sweep_cell(args) -> Tuple[List[float], List[float]]:
    instance, alphas = args
    weights, leaders = [], []
    for alpha in alphas:
        lab = solve_multipage(instance, alpha)
        weights.append(total_weight_cost(lab, instance))
        leaders.append(total_leader_cost(lab, instance))
    return weights, leaders


def _sliding_sweep_cell(args) -> Tuple[List[float], List[float]]:
    instance, alphas, hard_c1, iterations, seeds = args
    crossings, distances = [], []
    for alpha in alphas:
        cc, dd = [], []
        for seed in seeds:
            lab = solve_sliding_heuristic(
                instance, alpha, hard_c1=hard_c1, iterations=iterations, seed=seed
            )
            cc.append(total_crossing_cost(lab, instance))
            dd.append(total_distance_cost(lab, instance))
        crossings.append(statistics.fmean(cc))
        distances.append(statistics.fmean(dd))
    return crossings, distances


def sweep_alpha(
    instances: Sequence[Instance],
    method: str = "multipage",
    alphas: Sequence[float] = ALPHA_GRID,
    hard_c1: bool = False,
    iterations: int = 5000,
    seeds: Sequence[int] = tuple(range(5)),
) -> SweepReport:
    alphas = tuple(alphas)
    if 0.0 not in alphas or 1.0 not in alphas:
        raise DataError("alpha sweep must include both endpoints 0 and 1")
    i0 = alphas.index(0.0)
    i1 = alphas.index(1.0)
    if method == "multipage":
        cells = _pmap(_multipage_sweep_cell, [(inst, alphas) for inst in instances])
        labels = ("delta_w", "delta_l")
    elif method == "sliding":
        cells = _pmap(
            _sliding_sweep_cell,
            [(inst, alphas, hard_c1, iterations, tuple(seeds)) for inst in instances],
        )
        labels = ("delta_c", "delta_d")
    else:
        raise DataError(f"alpha sweep supports multipage and sliding, not {method!r}")

    delta_a: List[List[Optional[float]]] = []
    delta_b: List[List[Optional[float]]] = []
    for a_costs, b_costs in cells:
        # First series is referenced to its alpha=0 optimum, second to alpha=1.
        ref_a = a_costs[i0] if method == "multipage" else a_costs[i1]
        ref_b = b_costs[i1] if method == "multipage" else b_costs[i0]
        delta_a.append(
            [relative_cost(c, ref_a) if ref_a != 0.0 else None for c in a_costs]
        )
        delta_b.append(
            [relative_cost(c, ref_b) if ref_b != 0.0 else None for c in b_costs]
        )
    return SweepReport(
        method=method, alphas=alphas, delta_a=delta_a, delta_b=delta_b, labels=labels
    )


# ---------------------------------------------------------------------------
# Baseline evaluation
# ---------------------------------------------------------------------------


@dataclass
class SlidingEvalRow:
    instance_index: int
    exact_cost: Dict[float, Optional[float]]
    random_cost: Dict[float, float]
    heuristic_cost: Dict[float, float]
    delta_h: Dict[float, Optional[float]]
    crossings_exact: Optional[int]
    crossings_random: int
    crossings_max: Optional[int]
    distance_exact: Optional[float]
    distance_random: float
    distance_max: Optional[float]


@dataclass
class EvalReport:
    alphas: Tuple[float, ...]
    hard_c1: bool
    sliding_rows: List[SlidingEvalRow]
    stacking_delta_w: List[float]
    h_overlap_share: Dict[float, float]
    h_under5_share: Dict[float, float]
    distance_hist: Dict[float, List[int]]
    small_gap_counts: Dict[float, int]

    def delta_h_means(self) -> Dict[float, float]:
        out = {}
        for alpha in self.alphas:
            vals = [
                r.delta_h[alpha] for r in self.sliding_rows if r.delta_h[alpha] is not None
            ]
            out[alpha] = statistics.fmean(vals) if vals else math.nan
        return out


def _h_shares(labeling: Labeling, instance: Instance) -> Tuple[int, int, int]:
    """(total pairs, overlapping pairs, overlapping pairs under 5 px)."""
    total = overlap = under = 0
    for s in labeling.states:
        k_real = sum(1 for fid in s.assignment if fid not in labeling.dummy_ids)
        total += k_real * (k_real - 1) // 2
        gaps = vertical_gaps(s, instance, labeling.dummy_ids)
        overlap += len(gaps)
        under += sum(1 for g in gaps if g < SMALL_GAP_PX)
    return total, overlap, under


def _eval_cell(args) -> dict:
    (instance, alphas, hard_c1, iterations, seeds, budget, hist_alphas) = args
    out: dict = {}

    rand = random_sliding_baseline(instance, hard_c1=hard_c1, seed=seeds[0])
    exact: Dict[float, Optional[Labeling]] = {}
    for a in alphas:
        try:
            exact[a] = solve_sliding_exact(instance, a, hard_c1=hard_c1, budget=budget)
        except BudgetExceededError:
            exact[a] = None
    heur: Dict[float, List[Labeling]] = {
        a: [
            solve_sliding_heuristic(
                instance, a, hard_c1=hard_c1, iterations=iterations, seed=s
            )
            for s in seeds
        ]
        for a in alphas
    }
    try:
        max_c2 = max_cost_sliding(instance, "C2", hard_c1=hard_c1, budget=budget)
    except BudgetExceededError:
        max_c2 = None
    try:
        max_c3 = max_cost_sliding(instance, "C3", hard_c1=hard_c1, budget=budget)
    except BudgetExceededError:
        max_c3 = None

    exact_cost = {
        a: (cost_slid(exact[a], instance, a) if exact[a] else None) for a in alphas
    }
    random_cost = {a: cost_slid(rand, instance, a) for a in alphas}
    heuristic_cost = {
        a: statistics.fmean(cost_slid(h, instance, a) for h in heur[a]) for a in alphas
    }
    delta_h = {}
    for a in alphas:
        if exact_cost[a] is None or exact_cost[a] == 0.0:
            delta_h[a] = None
        else:
            delta_h[a] = relative_cost(heuristic_cost[a], exact_cost[a])

    out["sliding"] = dict(
        exact_cost=exact_cost,
        random_cost=random_cost,
        heuristic_cost=heuristic_cost,
        delta_h=delta_h,
        crossings_exact=(
            total_cross_count(exact[1.0], instance) if exact.get(1.0) else None
        ),
        crossings_random=total_cross_count(rand, instance),
        crossings_max=total_cross_count(max_c2, instance) if max_c2 else None,
        distance_exact=(
            total_distance_cost(exact[0.0], instance) if exact.get(0.0) else None
        ),
        distance_random=total_distance_cost(rand, instance),
        distance_max=total_distance_cost(max_c3, instance) if max_c3 else None,
    )

    stacks = sort_stacks_by_weight(solve_stacking(instance), instance)
    pages = stacks_to_pages(stacks)
    mp0 = solve_multipage(instance, 0.0)
    ref = total_weight_cost(mp0, instance)
    out["stacking_delta_w"] = (
        relative_cost(total_weight_cost(pages, instance), ref) if ref != 0.0 else None
    )

    out["h_shares"] = {}
    for a in alphas:
        lab = solve_multipage(instance, a)
        out["h_shares"][a] = _h_shares(lab, instance)

    out["hist"] = {}
    for a in hist_alphas:
        lab = solve_sliding_heuristic(
            instance, a, hard_c1=hard_c1, iterations=iterations, seed=seeds[0]
        )
        gaps = []
        for s in lab.states:
            gaps.extend(vertical_gaps(s, instance, lab.dummy_ids))
        bins = [0] * HIST_RANGE_PX
        small = 0
        for g in gaps:
            if g < SMALL_GAP_PX:
                small += 1
            if g < HIST_RANGE_PX:
                bins[int(g)] += 1
        out["hist"][a] = (bins, small)
    return out


def eval_report(
    instances: Sequence[Instance],
    alphas: Sequence[float] = EVAL_ALPHAS,
    hard_c1: bool = True,
    iterations: int = 5000,
    seeds: Sequence[int] = tuple(range(5)),
    budget: Optional[Budget] = None,
    hist_alphas: Sequence[float] = HIST_ALPHAS,
) -> EvalReport:
    """Baseline comparison on a set of instances.

    Per instance and alpha: exact sliding optimum (when the budget allows),
    Random and MaxC2/MaxC3 baselines, heuristic means over the seeds, the
    heuristic-vs-exact relative cost, the stacking-vs-multipage weight
    comparison, overlap-share ratios of the multipage solutions, and
    vertical-distance histograms of the heuristic.
    """
    alphas = tuple(alphas)
    budget = budget or Budget()
    cells = _pmap(
        _eval_cell,
        [
            (inst, alphas, hard_c1, iterations, tuple(seeds), budget, tuple(hist_alphas))
            for inst in instances
        ],
    )
    rows = []
    stacking_deltas = []
    shares_totals = {a: [0, 0, 0] for a in alphas}
    hist: Dict[float, List[int]] = {a: [0] * HIST_RANGE_PX for a in hist_alphas}
    small_counts: Dict[float, int] = {a: 0 for a in hist_alphas}
    for idx, cell in enumerate(cells):
        s = cell["sliding"]
        rows.append(
            SlidingEvalRow(
                instance_index=idx,
                exact_cost=s["exact_cost"],
                random_cost=s["random_cost"],
                heuristic_cost=s["heuristic_cost"],
                delta_h=s["delta_h"],
                crossings_exact=s["crossings_exact"],
                crossings_random=s["crossings_random"],
                crossings_max=s["crossings_max"],
                distance_exact=s["distance_exact"],
                distance_random=s["distance_random"],
                distance_max=s["distance_max"],
            )
        )
        if cell["stacking_delta_w"] is not None:
            stacking_deltas.append(cell["stacking_delta_w"])
        for a in alphas:
            t, o, u = cell["h_shares"][a]
            shares_totals[a][0] += t
            shares_totals[a][1] += o
            shares_totals[a][2] += u
        for a in hist_alphas:
            bins, small = cell["hist"][a]
            small_counts[a] += small
            for b in range(HIST_RANGE_PX):
                hist[a][b] += bins[b]
    overlap_share = {
        a: (shares_totals[a][1] / shares_totals[a][0] if shares_totals[a][0] else math.nan)
        for a in alphas
    }
    under5_share = {
        a: (shares_totals[a][2] / shares_totals[a][1] if shares_totals[a][1] else math.nan)
        for a in alphas
    }
    return EvalReport(
        alphas=alphas,
        hard_c1=hard_c1,
        sliding_rows=rows,
        stacking_delta_w=stacking_deltas,
        h_overlap_share=overlap_share,
        h_under5_share=under5_share,
        distance_hist=hist,
        small_gap_counts=small_counts,
    )


# ---------------------------------------------------------------------------
# Benchmark
# ---------------------------------------------------------------------------

BENCH_CELLS: Tuple[Tuple[int, int], ...] = ((5, 30), (5, 100), (10, 30), (10, 100))


@dataclass
class BenchRow:
    method: str
    k: int
    n: int
    runs: int
    mean_ms: float
    std_ms: float


@dataclass
class BenchReport:
    rows: List[BenchRow]
    machine: Dict[str, str]


def _bench_cell(args) -> BenchRow:
    method, k, n, runs, seed, iterations = args
    # k=10 labels cannot be 60 px wide on a 300 px screen; shrink to fit.
    label = min(60.0, 300.0 / k)
    times = []
    alphas = ALPHA_GRID
    total_runs = max(runs, len(alphas)) if method != "stacking" else runs
    for r in range(total_runs):
        inst = generate_instance(n=n, k=k, seed=seed + r, label_width=label, label_height=label)
        alpha = alphas[r % len(alphas)]
        t0 = time.perf_counter()
        if method == "multipage":
            solve_multipage(inst, alpha)
        elif method == "sliding":
            solve_sliding_heuristic(
                inst, alpha, hard_c1=False, iterations=iterations, seed=seed + r
            )
        elif method == "stacking":
            sort_stacks_by_weight(solve_stacking(inst), inst)
        else:
            raise DataError(f"unknown method {method!r}")
        times.append((time.perf_counter() - t0) * 1000.0)
    mean, std = _mean_std(times)
    return BenchRow(method=method, k=k, n=n, runs=total_runs, mean_ms=mean, std_ms=std)


def bench(
    methods: Sequence[str] = ("multipage", "sliding", "stacking"),
    cells: Sequence[Tuple[int, int]] = BENCH_CELLS,
    runs: int = 20,
    seed: int = 0,
    iterations: int = 5000,
) -> BenchReport:
    """Wall-clock solve times per (method, k, n) cell.

    Multipage and sliding runs cycle alpha through the 41-point grid, so
    the reported mean is averaged over the trade-off parameter as well.
    """
    # Warm up the compiled heuristic kernel outside the timed region.
    if "sliding" in methods:
        warm = generate_instance(n=8, k=2, seed=0)
        solve_sliding_heuristic(warm, 0.5, iterations=10, seed=0)
    rows = [
        _bench_cell((m, k, n, runs, seed, iterations))
        for m in methods
        for (k, n) in cells
    ]
    machine = {
        "platform": platform.platform(),
        "python": platform.python_version(),
        "processor": platform.processor() or "unknown",
        "cpus": str(os.cpu_count()),
    }
    return BenchReport(rows=rows, machine=machine)
