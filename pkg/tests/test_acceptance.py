"""Acceptance suite: one test per release criterion, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the printed
criterion lines alongside pytest's own pass/fail report.
"""

import math
import statistics
import time

import numpy as np
import pytest

from labelkit.costs import (
    cost_mpl,
    cost_slid,
    cross_count,
    total_leader_cost,
    total_weight_cost,
    vertical_gaps,
)
from labelkit.errors import BudgetExceededError
from labelkit.evaluation import ALPHA_GRID, BENCH_CELLS, bench
from labelkit.jsonio import dumps_canonical, instance_to_dict, labeling_to_dict
from labelkit.matching import matching_total, min_cost_perfect_matching
from labelkit.model import Labeling, State
from labelkit.multipage import solve_multipage
from labelkit.sliding import (
    first_fit_order,
    max_cost_sliding,
    order_to_labeling,
    random_sliding_baseline,
    solve_sliding_exact,
    solve_sliding_heuristic,
)
from labelkit.stacking import solve_stacking, sort_stacks_by_weight, stacks_to_pages
from labelkit.synth import generate_instance

from instances import random_grouped_instance
from oracles import (
    brute_force_min_total,
    crossing_free_same_port_exempt,
    multipage_exhaustive_min,
    sliding_exhaustive_best,
    stack_total_length,
    stacking_matching_total,
)

EVAL_ALPHAS = (0.0, 0.5, 1.0)


def report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    line = f"[ACCEPTANCE] {status} {name}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)
    assert ok, line


@pytest.fixture(scope="module")
def suite_n30k5():
    return [generate_instance(n=30, k=5, seed=1000 + i) for i in range(100)]


@pytest.fixture(scope="module")
def hard_suite():
    return [random_grouped_instance(12, 4, max_group=4, seed=i) for i in range(100)]


@pytest.fixture(scope="module")
def hard_exact(hard_suite):
    out = {}
    for i, inst in enumerate(hard_suite):
        for alpha in EVAL_ALPHAS:
            out[(i, alpha)] = solve_sliding_exact(inst, alpha, hard_c1=True)
    return out


def test_matching_oracle():
    rng = np.random.RandomState(2024)
    t0 = time.perf_counter()
    worst = 0.0
    for trial in range(200):
        n = rng.randint(1, 8)
        matrix = rng.uniform(0.0, 10.0, (n, n))
        assign = min_cost_perfect_matching(matrix)
        got = matching_total(matrix, assign)
        want = brute_force_min_total(matrix)
        worst = max(worst, abs(got - want))
        assert got == want, f"trial {trial}: {got} != {want}"
    elapsed = time.perf_counter() - t0
    report(
        "matching equals brute force on 200 random matrices",
        worst == 0.0 and elapsed < 5.0,
        f"max |diff| = {worst:g}, {elapsed:.2f} s",
    )


def test_multipage_optimality():
    worst = 0.0
    for seed in range(100):
        inst = generate_instance(n=8, k=2, seed=seed)
        for alpha in EVAL_ALPHAS:
            lab = solve_multipage(inst, alpha)
            got = cost_mpl(lab, inst, alpha)
            want = multipage_exhaustive_min(inst, alpha)
            worst = max(worst, abs(got - want))
            assert abs(got - want) <= 1e-9, (seed, alpha, got, want)
            assert len(lab.states) == 4
            seen = []
            for s in lab.states:
                assert cross_count(s, inst, lab.dummy_ids) == 0
                seen.extend(s.assignment)
            assert sorted(seen) == sorted(f.id for f in inst.features)
    report(
        "multipage optimal vs exhaustive enumeration (100 x {0,0.5,1})",
        worst <= 1e-9,
        f"max |diff| = {worst:.2e}",
    )


def test_alpha_sweep_endpoint_behavior(suite_n30k5):
    alphas = ALPHA_GRID
    n_alpha = len(alphas)
    dw_curves, dl_curves = [], []
    for inst in suite_n30k5:
        cw, cl = [], []
        for alpha in alphas:
            lab = solve_multipage(inst, alpha)
            cw.append(total_weight_cost(lab, inst))
            cl.append(total_leader_cost(lab, inst))
        dw = [(c - cw[0]) / cw[0] * 100.0 for c in cw]
        dl = [(c - cl[-1]) / cl[-1] * 100.0 for c in cl]
        assert dw[0] == 0.0
        assert dl[-1] == 0.0
        slack = 1e-6
        assert all(dw[a + 1] >= dw[a] - slack for a in range(n_alpha - 1)), "dw monotone"
        assert all(dl[a + 1] <= dl[a] + slack for a in range(n_alpha - 1)), "dl monotone"
        dw_curves.append(dw)
        dl_curves.append(dl)
    mean_dw = [statistics.fmean(c[a] for c in dw_curves) for a in range(n_alpha)]
    mean_dl = [statistics.fmean(c[a] for c in dl_curves) for a in range(n_alpha)]
    cross_at = None
    for a in range(1, n_alpha):
        prev = mean_dw[a - 1] - mean_dl[a - 1]
        cur = mean_dw[a] - mean_dl[a]
        if (prev < 0) != (cur < 0):
            cross_at = alphas[a]
            break
    report(
        "alpha-sweep endpoints: dw=0@0, dl=0@1, monotone, curves intersect",
        cross_at is not None and 0.0 < cross_at < 1.0,
        f"curves cross at alpha = {cross_at}",
    )


def test_sliding_exactness(hard_suite, hard_exact):
    worst = 0.0
    # Unconstrained lane: n=6, k=3.
    for seed in range(100):
        inst = generate_instance(n=6, k=3, seed=seed, label_width=100.0)
        for alpha in EVAL_ALPHAS:
            lab = solve_sliding_exact(inst, alpha)
            got = cost_slid(lab, inst, alpha)
            want, _ = sliding_exhaustive_best(inst, alpha, hard_c1=False)
            worst = max(worst, abs(got - want))
            assert abs(got - want) <= 1e-9, (seed, alpha)
            rand = random_sliding_baseline(inst, seed=seed)
            assert got <= cost_slid(rand, inst, alpha) + 1e-12
        mx2 = max_cost_sliding(inst, "C2")
        mx3 = max_cost_sliding(inst, "C3")
        e1 = cost_slid(solve_sliding_exact(inst, 1.0), inst, 1.0)
        e0 = cost_slid(solve_sliding_exact(inst, 0.0), inst, 0.0)
        assert cost_slid(mx2, inst, 1.0) >= e1 - 1e-12
        assert cost_slid(mx3, inst, 0.0) >= e0 - 1e-12
    # Hard-C1 lane: n=12, k=4, weight groups of at most 4.
    for i, inst in enumerate(hard_suite):
        for alpha in EVAL_ALPHAS:
            lab = hard_exact[(i, alpha)]
            got = cost_slid(lab, inst, alpha)
            want, _ = sliding_exhaustive_best(inst, alpha, hard_c1=True)
            worst = max(worst, abs(got - want))
            assert abs(got - want) <= 1e-9, (i, alpha)
            rand = random_sliding_baseline(inst, hard_c1=True, seed=i)
            assert got <= cost_slid(rand, inst, alpha) + 1e-12
        mx2 = max_cost_sliding(inst, "C2", hard_c1=True)
        mx3 = max_cost_sliding(inst, "C3", hard_c1=True)
        assert cost_slid(mx2, inst, 1.0) >= cost_slid(hard_exact[(i, 1.0)], inst, 1.0) - 1e-12
        assert cost_slid(mx3, inst, 0.0) >= cost_slid(hard_exact[(i, 0.0)], inst, 0.0) - 1e-12
    report(
        "sliding exact vs enumeration + baseline chain (both lanes)",
        worst <= 1e-9,
        f"max |diff| = {worst:.2e}",
    )


def test_heuristic_quality(hard_suite, hard_exact):
    seeds = range(5)
    means = {}
    skipped = {a: 0 for a in EVAL_ALPHAS}
    for alpha in EVAL_ALPHAS:
        deltas = []
        for i, inst in enumerate(hard_suite):
            exact_cost = cost_slid(hard_exact[(i, alpha)], inst, alpha)
            ff = order_to_labeling(first_fit_order(inst), inst, alpha=alpha)
            ff_cost = cost_slid(ff, inst, alpha)
            run_costs = []
            for seed in seeds:
                lab = solve_sliding_heuristic(
                    inst, alpha, hard_c1=True, iterations=5000, seed=seed
                )
                c = cost_slid(lab, inst, alpha)
                run_costs.append(c)
                assert exact_cost <= c + 1e-12, (i, alpha, seed)
                assert c <= ff_cost + 1e-12, (i, alpha, seed)
            if exact_cost == 0.0:
                skipped[alpha] += 1
                continue
            mean_cost = statistics.fmean(run_costs)
            deltas.append((mean_cost - exact_cost) / exact_cost * 100.0)
        means[alpha] = statistics.fmean(deltas) if deltas else 0.0
    ok = all(means[a] <= 25.0 for a in EVAL_ALPHAS)
    report(
        "heuristic quality: mean delta_H <= 25% at alpha in {0,0.5,1}",
        ok,
        ", ".join(
            f"alpha={a:g}: {means[a]:.1f}% (skipped {skipped[a]} zero-optimum)"
            for a in EVAL_ALPHAS
        ),
    )


def test_stacking_oracle(suite_n30k5):
    worst = 0.0
    for inst in suite_n30k5:
        stacks = solve_stacking(inst)
        got = stack_total_length(inst, stacks)
        want = stacking_matching_total(inst)
        worst = max(worst, abs(got - want))
        assert abs(got - want) <= 1e-9
        assert crossing_free_same_port_exempt(inst, stacks)
        ordered = sort_stacks_by_weight(stacks, inst)
        # Sorting permutes within ports, so the per-port length multisets
        # (hence the total, as a multiset sum) are preserved exactly.
        fmap = inst.feature_map()
        for before, after in zip(stacks.stacks, ordered.stacks):
            assert sorted(before) == sorted(after)
        assert stack_total_length(inst, ordered) == pytest.approx(got, abs=1e-9)
        pages = stacks_to_pages(ordered)
        rebuilt = tuple(
            tuple(pages.states[i].assignment[j] for i in range(len(pages.states)))
            for j in range(inst.k)
        )
        assert rebuilt == ordered.stacks
    report(
        "stacking equals matching oracle, crossing-free, round-trips",
        worst <= 1e-9,
        f"max |diff| = {worst:.2e}",
    )


def test_distance_optimization_trend(suite_n30k5):
    totals = {0.0: 0, 1.0: 0}
    for inst in suite_n30k5:
        for alpha in (0.0, 1.0):
            lab = solve_sliding_heuristic(inst, alpha, iterations=5000, seed=0)
            for s in lab.states:
                totals[alpha] += sum(
                    1 for g in vertical_gaps(s, inst, lab.dummy_ids) if g < 5.0
                )
    reduction = (totals[1.0] - totals[0.0]) / totals[1.0] * 100.0
    report(
        "distance trend: close H-pairs at alpha=0 vs alpha=1",
        totals[0.0] < totals[1.0] and reduction > 30.0,
        f"{totals[0.0]} vs {totals[1.0]} close pairs, reduction {reduction:.1f}%",
    )


def test_performance_budget():
    rep = bench(cells=BENCH_CELLS, runs=20, seed=7, iterations=5000)
    worst = max(r.mean_ms for r in rep.rows)
    detail = "; ".join(
        f"{r.method} k={r.k} n={r.n}: {r.mean_ms:.1f}ms" for r in rep.rows
    )
    report(
        "performance: every bench cell averages < 500 ms per solve",
        worst < 500.0,
        detail,
    )


def test_determinism():
    inst = generate_instance(n=8, k=2, seed=5)
    hard = random_grouped_instance(12, 4, max_group=4, seed=3)

    def text(lab, instance):
        return dumps_canonical(labeling_to_dict(lab, instance))

    checks = []
    checks.append(
        dumps_canonical(instance_to_dict(generate_instance(n=30, k=5, seed=9)))
        == dumps_canonical(instance_to_dict(generate_instance(n=30, k=5, seed=9)))
    )
    checks.append(
        text(solve_multipage(inst, 0.5), inst) == text(solve_multipage(inst, 0.5), inst)
    )
    checks.append(
        text(solve_sliding_exact(inst, 0.5), inst)
        == text(solve_sliding_exact(inst, 0.5), inst)
    )
    checks.append(
        text(solve_sliding_heuristic(hard, 0.5, hard_c1=True, iterations=2000, seed=11), hard)
        == text(solve_sliding_heuristic(hard, 0.5, hard_c1=True, iterations=2000, seed=11), hard)
    )
    checks.append(
        text(random_sliding_baseline(hard, hard_c1=True, seed=2), hard)
        == text(random_sliding_baseline(hard, hard_c1=True, seed=2), hard)
    )
    checks.append(
        text(max_cost_sliding(inst, "C2"), inst) == text(max_cost_sliding(inst, "C2"), inst)
    )
    st1 = stacks_to_pages(sort_stacks_by_weight(solve_stacking(inst), inst))
    st2 = stacks_to_pages(sort_stacks_by_weight(solve_stacking(inst), inst))
    checks.append(text(st1, inst) == text(st2, inst))
    report(
        "determinism: solvers and generator byte-identical across runs",
        all(checks),
        f"{sum(checks)}/{len(checks)} paths identical",
    )
