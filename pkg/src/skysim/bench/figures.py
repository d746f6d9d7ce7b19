"""Matplotlib figures saved alongside the delimited reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from ..interpreter import ExecutionTrace  # noqa: E402


def save_benchmark_figure(report, path: str | Path) -> Path:
    """Grouped bars of success rate and completeness per method."""
    path = Path(path)
    methods = [a.method for a in report.aggregates]
    sr = [a.success_rate for a in report.aggregates]
    comp = [100.0 * a.mean_completeness for a in report.aggregates]

    fig, ax = plt.subplots(figsize=(max(4.0, 1.6 * len(methods) + 1.5), 3.2))
    x = range(len(methods))
    width = 0.38
    bars_sr = ax.bar([i - width / 2 for i in x], sr, width, label="Success rate", color="#4878a8")
    bars_c = ax.bar([i + width / 2 for i in x], comp, width, label="Completeness", color="#d8854f")
    for bars in (bars_sr, bars_c):
        ax.bar_label(bars, fmt="%.1f", fontsize=8, padding=1)
    ax.set_xticks(list(x))
    ax.set_xticklabels(methods, fontsize=9)
    ax.set_ylabel("percent")
    ax.set_ylim(0, 112)
    ax.legend(fontsize=8, loc="lower right")
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_trajectory_figure(trace: ExecutionTrace, path: str | Path, title: str = "") -> Path:
    """Top-down ground track plus an altitude profile for one trace."""
    path = Path(path)
    xs = [s.x for s in trace.states]
    ys = [s.y for s in trace.states]
    alts = [-s.z for s in trace.states]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.4))
    ax1.plot(ys, xs, "o-", color="#4878a8", markersize=3, linewidth=1.2)
    ax1.plot(ys[0], xs[0], "s", color="#2e7d32", label="start")
    ax1.plot(ys[-1], xs[-1], "D", color="#c62828", label="end")
    ax1.set_xlabel("east (m)")
    ax1.set_ylabel("north (m)")
    ax1.set_title("ground track")
    ax1.set_aspect("equal", adjustable="datalim")
    ax1.legend(fontsize=8)

    ax2.plot(range(len(alts)), alts, "o-", color="#d8854f", markersize=3, linewidth=1.2)
    ax2.set_xlabel("state index")
    ax2.set_ylabel("altitude (m)")
    ax2.set_title("altitude profile")

    if title:
        fig.suptitle(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
