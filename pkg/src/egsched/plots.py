"""Matplotlib figures rendered next to the report CSVs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# Fixed metadata keeps PNG bytes reproducible across runs.
_PNG_META = {"Software": "egsched"}

_MARKERS = ["o", "s", "^", "d", "v", "*", "x"]


def _save(fig, path: Path) -> None:
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)


def usage_figure(series: dict[str, dict[float, float]], axis: str, path: Path) -> None:
    """Mean processor usage per bin, one line per algorithm."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for idx, (alg, per_bin) in enumerate(sorted(series.items())):
        if not per_bin:
            continue
        xs = sorted(per_bin)
        ax.plot(xs, [per_bin[x] for x in xs],
                marker=_MARKERS[idx % len(_MARKERS)], label=alg)
    ax.set_xlabel(axis)
    ax.set_ylabel("mean processors")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def acceptance_figure(series: dict[str, dict[float, float]], budget: int, path: Path) -> None:
    """Acceptance ratio per 0.1-wide utilization bin at the processor budget."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for idx, (alg, per_bin) in enumerate(sorted(series.items())):
        if not per_bin:
            continue
        xs = sorted(per_bin)
        ax.plot(xs, [per_bin[x] for x in xs],
                marker=_MARKERS[idx % len(_MARKERS)], label=alg)
    ax.set_xlabel("utilization")
    ax.set_ylabel(f"acceptance ratio (M={budget})")
    ax.set_ylim(-0.05, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def gap_figure(gaps: dict[str, float], path: Path) -> None:
    """Mean optimality gap per algorithm as a bar chart."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    algs = sorted(gaps)
    ax.bar(range(len(algs)), [100 * gaps[a] for a in algs])
    ax.set_xticks(range(len(algs)), algs, rotation=20)
    ax.set_ylabel("mean gap (%)")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


def gantt_figure(schedule, deadline: int, path: Path) -> None:
    """Per-processor Gantt chart of a schedule."""
    fig, ax = plt.subplots(figsize=(6, 1.0 + 0.5 * schedule.processors))
    for proc, nodes in enumerate(schedule.assignment):
        for v in nodes:
            width = schedule.finish[v] - schedule.start[v]
            if width == 0:
                continue
            ax.barh(proc, width, left=schedule.start[v], height=0.6,
                    edgecolor="black")
            ax.text(schedule.start[v] + width / 2, proc, f"v{v}",
                    ha="center", va="center", fontsize=8)
    ax.axvline(deadline, color="red", linestyle="--", linewidth=1)
    ax.set_yticks(range(schedule.processors),
                  [f"P{k + 1}" for k in range(schedule.processors)])
    ax.set_xlabel("time")
    ax.invert_yaxis()
    fig.tight_layout()
    _save(fig, path)
