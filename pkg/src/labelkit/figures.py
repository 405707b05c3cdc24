"""Render evaluation reports to figure files.

All figures go straight to disk via the Agg backend; nothing here opens a
window.  Each report path writes its figures next to the delimited output.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import List

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import BenchReport, EvalReport, SweepReport


def save_sweep_figure(report: SweepReport, path) -> Path:
    """Mean relative-cost curves of both criteria over the alpha grid."""
    rows = report.aggregate_rows()
    alphas = [r["alpha"] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, color in zip(report.labels, ("tab:blue", "tab:orange")):
        means = [r[f"{name}_mean"] for r in rows]
        stds = [r[f"{name}_std"] for r in rows]
        ax.plot(alphas, means, label=name, color=color)
        lo = [m - s for m, s in zip(means, stds)]
        hi = [m + s for m, s in zip(means, stds)]
        ax.fill_between(alphas, lo, hi, color=color, alpha=0.15, linewidth=0)
    ax.set_xlabel("alpha")
    ax.set_ylabel("relative cost [%]")
    ax.set_title(f"{report.method}: relative costs over alpha")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_eval_figures(report: EvalReport, outdir) -> List[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []

    # Heuristic-vs-exact relative cost histogram per alpha.
    fig, ax = plt.subplots(figsize=(6, 4))
    for alpha in report.alphas:
        vals = [
            r.delta_h[alpha]
            for r in report.sliding_rows
            if r.delta_h[alpha] is not None and math.isfinite(r.delta_h[alpha])
        ]
        if vals:
            ax.hist(vals, bins=20, alpha=0.5, label=f"alpha={alpha:g}")
    ax.set_xlabel("heuristic relative cost [%]")
    ax.set_ylabel("instances")
    ax.set_title("Heuristic vs exact")
    ax.legend()
    fig.tight_layout()
    p = outdir / "eval_delta_h_hist.png"
    fig.savefig(p, dpi=150)
    plt.close(fig)
    written.append(p)

    # Crossing counts per instance: exact vs random vs worst case.
    fig, ax = plt.subplots(figsize=(7, 4))
    series = [
        ("exact (alpha=1)", [r.crossings_exact for r in report.sliding_rows]),
        ("random", [r.crossings_random for r in report.sliding_rows]),
        ("max C2", [r.crossings_max for r in report.sliding_rows]),
    ]
    for name, values in series:
        xs = [i for i, v in enumerate(values) if v is not None]
        ys = [v for v in values if v is not None]
        if ys:
            ax.plot(xs, ys, marker=".", linestyle="", label=name, alpha=0.7)
    ax.set_xlabel("instance")
    ax.set_ylabel("crossings (unnormalized)")
    ax.set_title("Sliding crossings per instance")
    ax.legend()
    fig.tight_layout()
    p = outdir / "eval_crossings.png"
    fig.savefig(p, dpi=150)
    plt.close(fig)
    written.append(p)

    # Vertical-distance histogram of the heuristic solutions.
    fig, ax = plt.subplots(figsize=(7, 4))
    xs = list(range(len(next(iter(report.distance_hist.values())))))
    for alpha, bins in report.distance_hist.items():
        ax.step(xs, bins, where="post", label=f"alpha={alpha:g}")
    ax.set_xlabel("vertical distance [px]")
    ax.set_ylabel("leader pairs")
    ax.set_title("Small vertical leader distances")
    ax.legend()
    fig.tight_layout()
    p = outdir / "eval_distance_hist.png"
    fig.savefig(p, dpi=150)
    plt.close(fig)
    written.append(p)
    return written


def save_bench_figure(report: BenchReport, path) -> Path:
    """Mean solve time per cell, grouped by method."""
    methods = sorted({r.method for r in report.rows})
    cells = sorted({(r.k, r.n) for r in report.rows})
    fig, ax = plt.subplots(figsize=(7, 4))
    width = 0.8 / max(1, len(methods))
    for mi, method in enumerate(methods):
        xs, ys, errs = [], [], []
        for ci, cell in enumerate(cells):
            row = next(
                (r for r in report.rows if r.method == method and (r.k, r.n) == cell),
                None,
            )
            if row is not None:
                xs.append(ci + mi * width)
                ys.append(row.mean_ms)
                errs.append(row.std_ms)
        ax.bar(xs, ys, width=width, yerr=errs, label=method, capsize=3)
    ax.set_xticks([ci + width * (len(methods) - 1) / 2 for ci in range(len(cells))])
    ax.set_xticklabels([f"k={k}\nn={n}" for (k, n) in cells])
    ax.set_ylabel("mean solve time [ms]")
    ax.set_title("Solver timings")
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
