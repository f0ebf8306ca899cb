"""Pivot tables and figures from benchmark records.

Emits the per-cell processor-usage table (mean and standard deviation
per algorithm), marginal pivots by utilization or density, the
acceptance-ratio table at a given processor budget per 0.1-wide
utilization bin, and the optimality-gap table over the exactly solved
subset. Figures are rendered next to the CSVs.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from pathlib import Path
from typing import Sequence

from . import plots


def _mean_std(values: Sequence[float]) -> tuple[float, float]:
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(var)


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def _ok(record: dict) -> bool:
    return record["status"] == "ok" and int(record["processors"]) >= 1


def usage_by_cell(records: list[dict], out_csv: Path) -> list[str]:
    """Wide table: one row per (u, dens) cell, mean/std column per algorithm."""
    algs = sorted({r["algorithm"] for r in records})
    cells: dict[tuple, dict[str, list[int]]] = defaultdict(lambda: defaultdict(list))
    for r in records:
        if _ok(r):
            key = (float(r["u_lo"]), float(r["u_hi"]), float(r["d_lo"]), float(r["d_hi"]))
            cells[key][r["algorithm"]].append(int(r["processors"]))
    with open(out_csv, "w", newline="") as handle:
        writer = csv.writer(handle)
        header = ["u_lo", "u_hi", "d_lo", "d_hi"]
        for alg in algs:
            header += [f"{alg}_mean", f"{alg}_std", f"{alg}_count"]
        writer.writerow(header)
        for key in sorted(cells):
            row = [f"{v:g}" for v in key]
            for alg in algs:
                values = cells[key][alg]
                if values:
                    mean, std = _mean_std(values)
                    row += [_fmt(mean), _fmt(std), len(values)]
                else:
                    row += ["", "", 0]
            writer.writerow(row)
    return algs


def usage_by_axis(records: list[dict], axis: str, out_csv: Path) -> dict:
    """Marginal processor usage, binned by utilization (width 1) or density
    (width 0.1)."""
    algs = sorted({r["algorithm"] for r in records})
    series: dict[str, dict[float, list[int]]] = {alg: defaultdict(list) for alg in algs}
    for r in records:
        if not _ok(r):
            continue
        if axis == "utilization":
            bin_lo = math.floor(float(r["utilization"]))
        else:
            bin_lo = math.floor(float(r["density"]) * 10) / 10
        series[r["algorithm"]][bin_lo].append(int(r["processors"]))
    bins = sorted({b for per_alg in series.values() for b in per_alg})
    with open(out_csv, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow([axis] + [f"{alg}_mean" for alg in algs])
        for b in bins:
            row = [f"{b:g}"]
            for alg in algs:
                values = series[alg].get(b)
                row.append(_fmt(sum(values) / len(values)) if values else "")
            writer.writerow(row)
    return {alg: {b: sum(v) / len(v) for b, v in per_alg.items()}
            for alg, per_alg in series.items()}


def acceptance_ratio(records: list[dict], budget: int, out_csv: Path) -> dict:
    """Fraction of tasks schedulable within ``budget`` processors, per
    0.1-wide utilization bin and algorithm."""
    algs = sorted({r["algorithm"] for r in records})
    totals: dict[str, dict[float, int]] = {alg: defaultdict(int) for alg in algs}
    accepted: dict[str, dict[float, int]] = {alg: defaultdict(int) for alg in algs}
    for r in records:
        bin_lo = math.floor(float(r["utilization"]) * 10) / 10
        alg = r["algorithm"]
        totals[alg][bin_lo] += 1
        if _ok(r) and int(r["processors"]) <= budget:
            accepted[alg][bin_lo] += 1
    bins = sorted({b for per_alg in totals.values() for b in per_alg})
    with open(out_csv, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["u_bin_lo", "u_bin_hi"] + [f"{alg}_ratio" for alg in algs])
        for b in bins:
            row = [f"{b:g}", f"{b + 0.1:g}"]
            for alg in algs:
                total = totals[alg].get(b, 0)
                row.append(_fmt(accepted[alg][b] / total) if total else "")
            writer.writerow(row)
    return {alg: {b: accepted[alg][b] / t for b, t in per_alg.items() if t}
            for alg, per_alg in totals.items()}


def optimality_gaps(records: list[dict], out_csv: Path) -> dict[str, float]:
    """Mean (alg - opt) / opt per algorithm over tasks solved to optimality."""
    opt: dict[str, int] = {}
    for r in records:
        if r["algorithm"] == "exact" and r["status"] == "ok":
            opt[r["task_id"]] = int(r["processors"])
    sums: dict[str, list[float]] = defaultdict(list)
    for r in records:
        if r["algorithm"] == "exact" or not _ok(r):
            continue
        best = opt.get(r["task_id"])
        if best:
            sums[r["algorithm"]].append((int(r["processors"]) - best) / best)
    means = {alg: sum(v) / len(v) for alg, v in sorted(sums.items()) if v}
    with open(out_csv, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["algorithm", "mean_gap", "count"])
        for alg, gaps in sorted(sums.items()):
            writer.writerow([alg, _fmt(sum(gaps) / len(gaps)), len(gaps)])
    return means


def write_report(
    records: list[dict],
    out_dir: str | Path,
    pivot: str = "utilization",
    budget: int = 8,
    figures: bool = True,
) -> dict:
    """All tables (and figures) for a results file; returns summary data."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    usage_by_cell(records, out / "usage_by_cell.csv")
    marginal = usage_by_axis(records, pivot, out / f"usage_by_{pivot}.csv")
    ratios = acceptance_ratio(records, budget, out / "acceptance_ratio.csv")
    gaps = optimality_gaps(records, out / "optimality_gap.csv")
    if figures:
        plots.usage_figure(marginal, pivot, out / f"usage_by_{pivot}.png")
        plots.acceptance_figure(ratios, budget, out / "acceptance_ratio.png")
        if gaps:
            plots.gap_figure(gaps, out / "optimality_gap.png")
    return {"usage": marginal, "acceptance": ratios, "gaps": gaps}
