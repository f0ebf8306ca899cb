"""Random DAG task generation targeting utilization/density cells.

Structures are nested fork-joins: a node expands into 2..max_branches
parallel branches (each a short chain of sub-expansions) with
probability parallel_prob, up to max_depth. WCETs are drawn, scaled
onto a 10,000-tick deadline so that total-work/deadline lands in the
utilization range and longest-path/deadline in the density range, and
resampled until both predicates hold exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .analysis import analyze
from .errors import GenerationExhaustedError
from .task import DagTask, load_and_normalize

TICKS = 10_000
MAX_NODES = 140
SPLIT = (Fraction(6, 10), Fraction(2, 10), Fraction(2, 10))  # train : val : test


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(str(value))


@dataclass(frozen=True)
class StructureSpec:
    max_depth: int = 3
    parallel_prob: float = 0.5
    max_branches: int = 4


@dataclass(frozen=True)
class GenSpec:
    """One generation cell: ranges are half-open [lo, hi)."""

    u_range: tuple[Fraction, Fraction]
    dens_range: tuple[Fraction, Fraction]
    count: int = 1
    seed: int = 0
    structure: StructureSpec = StructureSpec()

    def __post_init__(self) -> None:
        object.__setattr__(self, "u_range", tuple(_as_fraction(v) for v in self.u_range))
        object.__setattr__(
            self, "dens_range", tuple(_as_fraction(v) for v in self.dens_range))
        u_lo, _ = self.u_range
        d_lo, d_hi = self.dens_range
        if not (0 < d_lo < 1):
            raise ValueError("density lower bound must be in (0, 1)")
        if u_lo < 1:
            raise ValueError("utilization lower bound must be >= 1")
        if self.count <= 0:
            raise ValueError("count must be positive")


def sample_structure(rng: random.Random, structure: StructureSpec) -> tuple[int, list[tuple[int, int]]]:
    """One nested fork-join skeleton; returns (node count, edges).

    The root always forks (when depth allows); nested nodes fork with
    probability parallel_prob. Branches are chains of one or two
    sub-expansions.
    """
    edges: list[tuple[int, int]] = []
    counter = [0]

    def new_node() -> int:
        counter[0] += 1
        return counter[0] - 1

    def build(depth: int, force: bool = False) -> tuple[int, int]:
        if depth >= structure.max_depth or (
                not force and rng.random() >= structure.parallel_prob):
            v = new_node()
            return v, v
        fork = new_node()
        join = new_node()
        for _ in range(rng.randint(2, structure.max_branches)):
            prev = fork
            for _ in range(rng.randint(1, 2)):
                entry, exit_ = build(depth + 1)
                edges.append((prev, entry))
                prev = exit_
            edges.append((prev, join))
        return fork, join

    build(0, force=True)
    return counter[0], edges


def _longest_path(n: int, edges: Sequence[tuple[int, int]], weights: Sequence[int]) -> int:
    indeg = [0] * n
    succs: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        indeg[j] += 1
        succs[i].append(j)
    stack = [v for v in range(n) if indeg[v] == 0]
    dist = [0] * n
    best = 0
    while stack:
        u = stack.pop()
        fu = dist[u] + weights[u]
        if fu > best:
            best = fu
        for v in succs[u]:
            if fu > dist[v]:
                dist[v] = fu
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return best


def generate_task(spec: GenSpec, rng: random.Random) -> DagTask:
    """One task whose utilization and density fall in the cell's ranges.

    All predicate checks are exact integer cross-multiplications against
    the rational range bounds.
    """
    u_lo, u_hi = spec.u_range
    d_lo, d_hi = spec.dens_range
    deadline = TICKS
    base = spec.structure
    for attempt in range(10_000):
        # High-utilization low-density cells need structural parallelism
        # around u_hi/d_lo; widen branches progressively when the
        # configured structure keeps missing.
        structure = base if attempt < 500 else StructureSpec(
            base.max_depth,
            base.parallel_prob,
            base.max_branches + attempt // 500,
        )
        n, edges = sample_structure(rng, structure)
        if n > MAX_NODES:
            continue
        weights = [rng.randint(1, 100) for _ in range(n)]
        total = sum(weights)
        longest = _longest_path(n, edges, weights)
        # Uniform scaling moves (U, dens) along a fixed ray; both ranges
        # must admit a common scale factor alpha.
        alpha_lo = max(u_lo * deadline / total, d_lo * deadline / longest)
        alpha_hi = min(u_hi * deadline / total, d_hi * deadline / longest)
        if alpha_lo >= alpha_hi:
            continue
        alpha = (alpha_lo + alpha_hi) / 2
        num, den = alpha.numerator, alpha.denominator
        wcet = [num * w // den for w in weights]
        total_ticks = sum(wcet)
        # Rounding down sheds up to n ticks; top one slack node back up.
        if total_ticks * u_lo.denominator < u_lo.numerator * deadline:
            floor_target = (u_lo.numerator * deadline) // u_lo.denominator
            wcet[_slackest_node(n, edges, wcet)] += floor_target - total_ticks + 1
            total_ticks = sum(wcet)
        if not _in_range(total_ticks, deadline, u_lo, u_hi):
            continue
        if not _in_range(_longest_path(n, edges, wcet), deadline, d_lo, d_hi):
            continue
        raw = {
            "wcet": wcet,
            "edges": [list(e) for e in sorted(edges)],
            "deadline": deadline,
            "period": deadline,
        }
        return load_and_normalize(raw)
    raise GenerationExhaustedError(
        f"no task found for U in {spec.u_range}, dens in {spec.dens_range}")


def _in_range(ticks: int, deadline: int, lo: Fraction, hi: Fraction) -> bool:
    """Exact check of lo <= ticks/deadline < hi by cross-multiplication."""
    return (lo.numerator * deadline <= ticks * lo.denominator
            and ticks * hi.denominator < hi.numerator * deadline)


def _slackest_node(n: int, edges: Sequence[tuple[int, int]], wcet: Sequence[int]) -> int:
    """Node with the shortest longest-path-through, so a bump rarely moves
    the graph length."""
    indeg = [0] * n
    succs: list[list[int]] = [[] for _ in range(n)]
    preds: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        indeg[j] += 1
        succs[i].append(j)
        preds[j].append(i)
    order: list[int] = []
    stack = [v for v in range(n) if indeg[v] == 0]
    while stack:
        u = stack.pop()
        order.append(u)
        for v in succs[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    down = [0] * n
    for u in reversed(order):
        down[u] = wcet[u] + max((down[v] for v in succs[u]), default=0)
    up = [0] * n
    for u in order:
        up[u] = max((up[p] + wcet[p] for p in preds[u]), default=0)
    return min(range(n), key=lambda v: (up[v] + down[v], v))


# -- dataset --------------------------------------------------------------------


def default_grid() -> tuple[tuple[tuple[Fraction, Fraction], ...], tuple[tuple[Fraction, Fraction], ...]]:
    """The 7 x 5 sweep: U in [1,2)..[7,8), dens in [0.5,0.6)..[0.9,1.0)."""
    u_ranges = tuple((Fraction(u), Fraction(u + 1)) for u in range(1, 8))
    dens_ranges = tuple(
        (Fraction(d, 10), Fraction(d + 1, 10)) for d in range(5, 10))
    return u_ranges, dens_ranges


def cell_label(u_range: tuple[Fraction, Fraction], dens_range: tuple[Fraction, Fraction]) -> str:
    u_lo, u_hi = u_range
    d_lo, d_hi = dens_range
    return f"u{float(u_lo):g}-{float(u_hi):g}_d{float(d_lo):g}-{float(d_hi):g}"


def split_counts(per_cell: int) -> tuple[int, int, int]:
    """Exact per-cell train/val/test counts for the 0.6 : 0.2 : 0.2 split."""
    train = int(per_cell * SPLIT[0])
    val = int(per_cell * SPLIT[1])
    return train, val, per_cell - train - val


def generate_dataset(
    out_dir: str | Path,
    per_cell: int,
    seed: int,
    u_ranges: Iterable[tuple] | None = None,
    dens_ranges: Iterable[tuple] | None = None,
    structure: StructureSpec = StructureSpec(),
) -> dict:
    """Write train/val/test task files per cell, plus a manifest.

    Layout: ``<out>/{train,val,test}/<cell>/task_<k>.json``. Each cell
    draws from its own generator seeded with ``seed XOR cell index``,
    and the split is applied cell by cell.
    """
    default_u, default_d = default_grid()
    u_list = [tuple(_as_fraction(v) for v in r) for r in (u_ranges or default_u)]
    d_list = [tuple(_as_fraction(v) for v in r) for r in (dens_ranges or default_d)]
    out = Path(out_dir)
    manifest: dict = {
        "seed": seed,
        "per_cell": per_cell,
        "structure": {
            "max_depth": structure.max_depth,
            "parallel_prob": structure.parallel_prob,
            "max_branches": structure.max_branches,
        },
        "split": [float(s) for s in SPLIT],
        "cells": [],
    }
    train, val, test = split_counts(per_cell)
    bounds = (("train", 0, train), ("val", train, train + val),
              ("test", train + val, per_cell))
    for index, (u_range, dens_range) in enumerate(
            (u, d) for u in u_list for d in d_list):
        label = cell_label(u_range, dens_range)
        cell_seed = seed ^ index
        rng = random.Random(cell_seed)
        spec = GenSpec(u_range, dens_range, count=per_cell, seed=cell_seed,
                       structure=structure)
        tasks = [generate_task(spec, rng) for _ in range(per_cell)]
        for split_name, lo, hi in bounds:
            cell_dir = out / split_name / label
            cell_dir.mkdir(parents=True, exist_ok=True)
            for k in range(lo, hi):
                tasks[k].write(cell_dir / f"task_{k}.json")
        manifest["cells"].append({
            "label": label,
            "index": index,
            "seed": cell_seed,
            "u_range": [float(u_range[0]), float(u_range[1])],
            "dens_range": [float(dens_range[0]), float(dens_range[1])],
        })
    out.mkdir(parents=True, exist_ok=True)
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def task_utilization(task: DagTask) -> Fraction:
    return Fraction(task.total_wcet, task.deadline)


def task_density(task: DagTask) -> Fraction:
    return Fraction(analyze(task).length, task.deadline)
