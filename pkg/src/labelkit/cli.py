"""Command-line surface.

Subcommands: gen, ingest, solve, sweep-alpha, eval, bench, serve.
Exit codes: 0 success, 2 usage error, 3 data error, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import evaluation, figures, jsonio
from .errors import BudgetExceededError, DataError
from .ingest import load_csv, sample_instances
from .model import Instance
from .multipage import solve_multipage
from .sliding import Budget, solve_sliding_exact, solve_sliding_heuristic
from .stacking import solve_stacking, sort_stacks_by_weight, stacks_to_pages
from .synth import generate_instances

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_BUDGET = 4


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.9g}"
    return str(x)


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _load_instances(path: str) -> List[Tuple[str, Instance]]:
    p = Path(path)
    if p.is_dir():
        files = sorted(p.glob("*.json"))
        if not files:
            raise DataError(f"no .json instances under {p}")
        return [(f.stem, jsonio.load_instance(f)) for f in files]
    return [(p.stem, jsonio.load_instance(p))]


def _alpha(value: str, parser: argparse.ArgumentParser) -> float:
    try:
        a = float(value)
    except ValueError:
        parser.error(f"invalid alpha {value!r}")
    if not 0.0 <= a <= 1.0:
        parser.error(f"alpha must be in [0, 1], got {a}")
    return a


def _budget(args) -> Budget:
    return Budget(
        node_limit=args.nodes,
        time_limit=args.time_limit,
        exact_size_cap=args.exact_cap,
    )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args, parser) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    label = min(args.label, args.screen / args.k)
    instances = generate_instances(
        count=args.count,
        n=args.n,
        k=args.k,
        seed=args.seed,
        screen_width=args.screen,
        screen_height=args.screen,
        label_width=label,
        label_height=label,
    )
    for i, inst in enumerate(instances):
        jsonio.save_instance(inst, outdir / f"instance-{i:03d}.json")
    print(f"wrote {len(instances)} instances to {outdir}")
    return EXIT_OK


def _parse_mapping(spec: str, parser) -> Dict[str, str]:
    mapping = {}
    for part in spec.split(","):
        if "=" not in part:
            parser.error(f"bad --map entry {part!r}, expected logical=COLUMN")
        logical, col = part.split("=", 1)
        mapping[logical.strip()] = col.strip()
    return mapping


def cmd_ingest(args, parser) -> int:
    mapping = _parse_mapping(args.map, parser)
    records = load_csv(args.input, mapping)
    instances = sample_instances(
        records,
        count=args.count,
        n=args.n,
        seed=args.seed,
        section_fraction=args.section_fraction,
        grid=args.grid,
        screen_width=args.screen,
        screen_height=args.screen,
        label_width=min(args.label, args.screen / args.k),
        label_height=min(args.label, args.screen / args.k),
        k=args.k,
        flip_y=not args.no_flip_y,
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for i, inst in enumerate(instances):
        jsonio.save_instance(inst, outdir / f"instance-{i:03d}.json")
    print(f"ingested {len(records)} records; wrote {len(instances)} instances to {outdir}")
    return EXIT_OK


def cmd_solve(args, parser) -> int:
    alpha = _alpha(args.alpha, parser)
    if args.mode is not None and args.method != "sliding":
        parser.error("--mode is only valid for --method sliding")
    _, instance = _load_instances(args.input)[0]
    if args.k is not None:
        instance = Instance(
            screen_width=instance.screen_width,
            screen_height=instance.screen_height,
            label_width=min(instance.label_width, instance.screen_width / args.k),
            label_height=instance.label_height,
            k=args.k,
            features=instance.features,
        )

    budget_exceeded = False
    if args.method == "multipage":
        labeling = solve_multipage(instance, alpha)
    elif args.method == "stacking":
        stacks = sort_stacks_by_weight(solve_stacking(instance), instance)
        labeling = stacks_to_pages(stacks, alpha=alpha)
    else:
        mode = args.mode or "heuristic"
        if mode == "heuristic":
            labeling = solve_sliding_heuristic(
                instance,
                alpha,
                hard_c1=args.hard_c1,
                iterations=args.iterations,
                seed=args.seed,
            )
        else:
            try:
                labeling = solve_sliding_exact(
                    instance, alpha, hard_c1=args.hard_c1, budget=_budget(args)
                )
            except BudgetExceededError as exc:
                labeling = exc.incumbent
                budget_exceeded = True
                print(f"budget exceeded: {exc}", file=sys.stderr)

    text = jsonio.dumps_canonical(jsonio.labeling_to_dict(labeling, instance))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_BUDGET if budget_exceeded else EXIT_OK


def _alpha_grid(step: float) -> List[float]:
    count = round(1.0 / step)
    return [i / count for i in range(count + 1)]


def cmd_sweep_alpha(args, parser) -> int:
    instances = [inst for _, inst in _load_instances(args.input)]
    alphas = _alpha_grid(args.step)
    report = evaluation.sweep_alpha(
        instances,
        method=args.method,
        alphas=alphas,
        hard_c1=args.hard_c1,
        iterations=args.iterations,
        seeds=tuple(range(args.reps)),
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = report.aggregate_rows()
    a, b = report.labels
    header = ["alpha", f"{a}_mean", f"{a}_std", f"{a}_count", f"{b}_mean", f"{b}_std", f"{b}_count"]
    _write_csv(
        outdir / "sweep.csv",
        header,
        [[r["alpha"], r[f"{a}_mean"], r[f"{a}_std"], r[f"{a}_count"],
          r[f"{b}_mean"], r[f"{b}_std"], r[f"{b}_count"]] for r in rows],
    )
    payload = {
        "method": report.method,
        "rows": rows,
        "crossing_alpha": report.crossing_alpha(),
    }
    (outdir / "sweep.json").write_text(
        jsonio.dumps_canonical(jsonio.json_safe(payload)), encoding="utf-8"
    )
    figures.save_sweep_figure(report, outdir / "sweep_curves.png")
    print(f"wrote sweep.csv, sweep.json, sweep_curves.png to {outdir}")
    return EXIT_OK


def cmd_eval(args, parser) -> int:
    instances = [inst for _, inst in _load_instances(args.input)]
    alphas = tuple(_alpha(a, parser) for a in args.alphas.split(","))
    report = evaluation.eval_report(
        instances,
        alphas=alphas,
        hard_c1=args.hard_c1,
        iterations=args.iterations,
        seeds=tuple(range(args.seeds)),
        budget=_budget(args),
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    header = ["instance"]
    for a in alphas:
        header += [f"exact@{a:g}", f"random@{a:g}", f"heuristic@{a:g}", f"delta_h@{a:g}"]
    header += [
        "crossings_exact", "crossings_random", "crossings_max",
        "distance_exact", "distance_random", "distance_max",
    ]
    rows = []
    for r in report.sliding_rows:
        row: List = [r.instance_index]
        for a in alphas:
            row += [r.exact_cost[a], r.random_cost[a], r.heuristic_cost[a], r.delta_h[a]]
        row += [
            r.crossings_exact, r.crossings_random, r.crossings_max,
            r.distance_exact, r.distance_random, r.distance_max,
        ]
        rows.append(row)
    _write_csv(outdir / "eval_sliding.csv", header, rows)

    mean_dh = report.delta_h_means()
    stack_mean, stack_std = evaluation._mean_std(report.stacking_delta_w)
    payload = {
        "alphas": list(alphas),
        "hard_c1": report.hard_c1,
        "delta_h_mean": {f"{a:g}": mean_dh[a] for a in alphas},
        "stacking_delta_w_mean": stack_mean,
        "stacking_delta_w_std": stack_std,
        "h_overlap_share": {f"{a:g}": report.h_overlap_share[a] for a in alphas},
        "h_under5_share": {f"{a:g}": report.h_under5_share[a] for a in alphas},
        "small_gap_counts": {f"{a:g}": report.small_gap_counts[a] for a in report.small_gap_counts},
        "distance_hist": {f"{a:g}": report.distance_hist[a] for a in report.distance_hist},
    }
    (outdir / "eval_summary.json").write_text(
        jsonio.dumps_canonical(jsonio.json_safe(payload)), encoding="utf-8"
    )
    figures.save_eval_figures(report, outdir)
    print(f"wrote eval_sliding.csv, eval_summary.json, and figures to {outdir}")
    return EXIT_OK


def cmd_bench(args, parser) -> int:
    cells = []
    for part in args.cells.split(","):
        try:
            k, n = part.lower().split("x")
            cells.append((int(k), int(n)))
        except ValueError:
            parser.error(f"bad --cells entry {part!r}, expected KxN")
    report = evaluation.bench(
        methods=tuple(args.methods.split(",")),
        cells=cells,
        runs=args.runs,
        seed=args.seed,
        iterations=args.iterations,
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        outdir / "bench.csv",
        ["method", "k", "n", "runs", "mean_ms", "std_ms"],
        [[r.method, r.k, r.n, r.runs, r.mean_ms, r.std_ms] for r in report.rows],
    )
    payload = {
        "machine": report.machine,
        "rows": [
            {
                "method": r.method,
                "k": r.k,
                "n": r.n,
                "runs": r.runs,
                "mean_ms": r.mean_ms,
                "std_ms": r.std_ms,
            }
            for r in report.rows
        ],
    }
    (outdir / "bench.json").write_text(jsonio.dumps_canonical(payload), encoding="utf-8")
    figures.save_bench_figure(report, outdir / "bench.png")
    for r in report.rows:
        print(f"{r.method:10s} k={r.k:<3d} n={r.n:<4d} {r.mean_ms:8.2f} ± {r.std_ms:.2f} ms")
    return EXIT_OK


def cmd_serve(args, parser) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.instances_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="labelkit",
        description="Boundary labelings for zoomless maps: solvers, evaluation, demo service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate synthetic instances")
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--screen", type=float, default=300.0)
    p.add_argument("--label", type=float, default=60.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("ingest", help="build instances from a CSV of rated points")
    p.add_argument("--input", required=True)
    p.add_argument(
        "--map",
        required=True,
        help="column mapping, e.g. id=business_id,x=longitude,y=latitude,stars=stars",
    )
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--screen", type=float, default=300.0)
    p.add_argument("--label", type=float, default=60.0)
    p.add_argument("--section-fraction", type=float, default=1.0 / 3.0)
    p.add_argument("--grid", type=int, default=10)
    p.add_argument("--no-flip-y", action="store_true",
                   help="source y already grows downward")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("solve", help="compute one labeling")
    p.add_argument("--method", required=True, choices=("multipage", "sliding", "stacking"))
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", default="0.5")
    p.add_argument("--mode", choices=("exact", "heuristic"))
    p.add_argument("--hard-c1", action="store_true")
    p.add_argument("--iterations", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int)
    p.add_argument("--output")
    p.add_argument("--nodes", type=int, default=Budget.node_limit)
    p.add_argument("--time-limit", type=float, default=Budget.time_limit)
    p.add_argument("--exact-cap", type=int, default=Budget.exact_size_cap)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep-alpha", help="relative-cost curves over the alpha grid")
    p.add_argument("--input", required=True, help="instance file or directory")
    p.add_argument("--method", default="multipage", choices=("multipage", "sliding"))
    p.add_argument("--step", type=float, default=0.025)
    p.add_argument("--hard-c1", action="store_true")
    p.add_argument("--iterations", type=int, default=5000)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep_alpha)

    p = sub.add_parser("eval", help="baseline comparisons and histograms")
    p.add_argument("--input", required=True)
    p.add_argument("--alphas", default="0,0.5,1")
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--iterations", type=int, default=5000)
    p.add_argument("--hard-c1", dest="hard_c1", action="store_true", default=True)
    p.add_argument("--unconstrained", dest="hard_c1", action="store_false",
                   help="drop the descending-weight restriction")
    p.add_argument("--nodes", type=int, default=Budget.node_limit)
    p.add_argument("--time-limit", type=float, default=Budget.time_limit)
    p.add_argument("--exact-cap", type=int, default=Budget.exact_size_cap)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="solver timing table")
    p.add_argument("--methods", default="multipage,sliding,stacking")
    p.add_argument("--cells", default="5x30,5x100,10x30,10x100")
    p.add_argument("--runs", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=5000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="HTTP facade for the web demo")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--instances-dir", required=True)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
