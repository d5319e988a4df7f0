"""Figure rendering for benchmark reports.

Renders the trend figures that accompany the delimited benchmark output:
per-stage timing vs vehicle count on log-log axes, and the mean-partitions
curve vs vehicle count. Uses the Agg backend so figures render headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from bsmsim.bench import STAGES, TrendReport

STAGE_COLORS = {
    "distance": "tab:blue",
    "closure": "tab:red",
    "oracle": "tab:green",
    "serialize": "tab:orange",
}


def plot_stage_times(report: TrendReport, out_path: str | Path) -> Path:
    """Mean stage time vs N, log-log, with the fitted slope in the legend."""
    out_path = Path(out_path)
    fig, ax = plt.subplots(figsize=(7, 5))
    for stage in STAGES:
        points = sorted(
            (a.n, a.mean_ms) for a in report.aggregates if a.stage == stage and a.mean_ms > 0
        )
        if not points:
            continue
        ns = [p[0] for p in points]
        means = [p[1] for p in points]
        fit = report.slopes.get(stage)
        label = stage if fit is None else f"{stage} (slope {fit.slope:.2f})"
        ax.plot(ns, means, "o-", color=STAGE_COLORS.get(stage), label=label)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("vehicles per frame")
    ax.set_ylabel("mean stage time (ms)")
    ax.set_title("Pipeline stage time vs vehicle count")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path


def plot_partition_curve(report: TrendReport, out_path: str | Path) -> Path:
    """Mean partition count vs N."""
    out_path = Path(out_path)
    fig, ax = plt.subplots(figsize=(7, 5))
    ns = [p.n for p in report.partition_curve]
    means = [p.mean_partitions for p in report.partition_curve]
    ax.plot(ns, means, "o-", color="tab:purple")
    ax.set_xlabel("vehicles per frame")
    ax.set_ylabel("mean partitions")
    ax.set_title("Average number of partitions vs vehicle count")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path


def render_report_figures(report: TrendReport, out_dir: str | Path, prefix: str) -> list[Path]:
    """Render every figure for a report; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [plot_stage_times(report, out_dir / f"{prefix}-stage-times.png")]
    if report.partition_curve:
        paths.append(plot_partition_curve(report, out_dir / f"{prefix}-partitions.png"))
    return paths
