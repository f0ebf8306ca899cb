"""Benchmark harness: run algorithms over a dataset, persist records, pivot.

One CSV row per (task, algorithm). Rows are computed task by task
(optionally across processes), then sorted before writing so parallel
execution never changes the output bytes; the runtime_ms column is the
only wall-clock-dependent field.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .analysis import analyze
from .baselines import incremental_search, vertex_length_priority
from .engine import egs_run, greedy_policy, random_policy
from .errors import InfeasibleDeadlineError
from .exact import ExactStatus, branch_and_bound
from .task import DagTask, load_task

CSV_COLUMNS = [
    "task_id", "u_lo", "u_hi", "d_lo", "d_hi", "n",
    "utilization", "density", "algorithm", "processors",
    "runtime_ms", "seed", "status",
]

ALGORITHMS = ("egs-grd", "egs-rnd", "baseline-vl", "exact")


@dataclass(frozen=True)
class BenchRecord:
    task_id: str
    cell: tuple[float, float, float, float]  # u_lo, u_hi, d_lo, d_hi
    n: int
    utilization: float
    density: float
    algorithm: str
    processors: int
    runtime_ms: int
    seed: int
    status: str

    def row(self) -> list:
        u_lo, u_hi, d_lo, d_hi = self.cell
        return [
            self.task_id, f"{u_lo:g}", f"{u_hi:g}", f"{d_lo:g}", f"{d_hi:g}",
            self.n, f"{self.utilization:.6g}", f"{self.density:.6g}",
            self.algorithm, self.processors, self.runtime_ms, self.seed,
            self.status,
        ]


def _parse_cell(label: str) -> tuple[float, float, float, float]:
    # Labels look like u1-2_d0.9-1.
    try:
        u_part, d_part = label.split("_")
        u_lo, u_hi = u_part[1:].split("-")
        d_lo, d_hi = d_part[1:].split("-")
        return float(u_lo), float(u_hi), float(d_lo), float(d_hi)
    except ValueError:
        return (0.0, 0.0, 0.0, 0.0)


def run_algorithm(
    name: str,
    task: DagTask,
    seed: int,
    time_limit: float | None = None,
) -> tuple[int, str]:
    """Returns (processors, status). Status 'infeasible' carries processors 0."""
    try:
        if name == "egs-grd":
            return egs_run(task, greedy_policy, seed).processors, "ok"
        if name == "egs-rnd":
            return egs_run(task, random_policy, seed).processors, "ok"
        if name == "baseline-vl":
            return incremental_search(task, vertex_length_priority(analyze(task))), "ok"
        if name == "exact":
            result = branch_and_bound(task, time_limit)
            status = "ok" if result.status is ExactStatus.OPTIMAL else "timeout"
            return result.min_processors, status
    except InfeasibleDeadlineError:
        return 0, "infeasible"
    raise ValueError(f"unknown algorithm {name!r}")


def _bench_one(args: tuple) -> list[BenchRecord]:
    path, task_id, cell, algs, seed, time_limit = args
    task = load_task(path)
    analysis = analyze(task)
    utilization = float(Fraction(task.total_wcet, task.deadline))
    density = float(Fraction(analysis.length, task.deadline))
    records = []
    for alg in algs:
        began = time.perf_counter()
        processors, status = run_algorithm(alg, task, seed, time_limit)
        elapsed_ms = int((time.perf_counter() - began) * 1000)
        records.append(BenchRecord(
            task_id=task_id,
            cell=cell,
            n=task.n,
            utilization=utilization,
            density=density,
            algorithm=alg,
            processors=processors,
            runtime_ms=elapsed_ms,
            seed=seed,
            status=status,
        ))
    return records


def discover_tasks(dataset_dir: str | Path, split: str = "test") -> list[tuple[Path, str, tuple]]:
    """(path, task_id, cell) triples for a dataset split, sorted by id."""
    root = Path(dataset_dir)
    base = root / split if (root / split).is_dir() else root
    found = []
    for path in sorted(base.rglob("*.json")):
        if path.name == "manifest.json":
            continue
        cell_name = path.parent.name
        task_id = f"{cell_name}/{path.stem}"
        found.append((path, task_id, _parse_cell(cell_name)))
    return found


def bench_dataset(
    dataset_dir: str | Path,
    algs: Sequence[str],
    out_csv: str | Path,
    seed: int = 0,
    jobs: int = 1,
    split: str = "test",
    time_limit: float | None = None,
) -> int:
    """Run every algorithm on every task of the split; write sorted CSV."""
    for alg in algs:
        if alg not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {alg!r}")
    tasks = discover_tasks(dataset_dir, split)
    work = [(path, task_id, cell, tuple(algs), seed, time_limit)
            for path, task_id, cell in tasks]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_bench_one, work))
    else:
        chunks = [_bench_one(item) for item in work]
    records = [record for chunk in chunks for record in chunk]
    records.sort(key=lambda r: (r.task_id, r.algorithm))
    write_records(records, out_csv)
    return len(records)


def write_records(records: Iterable[BenchRecord], out_csv: str | Path) -> None:
    with open(out_csv, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow(record.row())


def read_records(path: str | Path) -> list[dict]:
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))
