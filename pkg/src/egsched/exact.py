"""Optimality oracle: exact minimum processor count for small tasks.

An internal branch-and-bound searches processor counts upward from the
workload lower bound; for each count it enumerates precedence-respecting
placement sequences with latest-start pruning, capacity pruning, and
memoized dead states. The same problem is also exported as a
mixed-integer linear program in CPLEX LP format for external solvers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .analysis import analyze
from .baselines import list_schedule, vertex_length_priority
from .dispatch import Schedule, partitioned_dispatch
from .engine import lower_bound
from .errors import InfeasibleDeadlineError, NotOptimalError
from .task import DagTask


class ExactStatus(Enum):
    OPTIMAL = "optimal"
    TIMED_OUT = "timed_out"


@dataclass(frozen=True)
class ExactResult:
    min_processors: int
    schedule: Schedule
    explored_nodes: int
    status: ExactStatus


class _Timeout(Exception):
    pass


def branch_and_bound(task: DagTask, time_limit: float | None = None) -> ExactResult:
    """Minimum processors, proven by exhausted search below the answer.

    Counts are tried upward from the workload lower bound, so the first
    feasible count is optimal. On expiry of ``time_limit`` (seconds) the
    best-known upper bound is returned with a TIMED_OUT status.
    """
    analysis = analyze(task)
    if analysis.length > task.deadline:
        raise InfeasibleDeadlineError(
            f"length {analysis.length} > deadline {task.deadline}")
    floor = lower_bound(task, analysis)
    deadline_clock = None if time_limit is None else time.monotonic() + time_limit
    explored = [0]
    priorities = vertex_length_priority(analysis)
    for m in range(floor, analysis.width + 1):
        # A heuristic witness settles feasibility without searching.
        heuristic = list_schedule(task, m, priorities)
        if heuristic.makespan <= task.deadline:
            return ExactResult(m, heuristic, explored[0], ExactStatus.OPTIMAL)
        try:
            witness = _search(task, analysis, m, deadline_clock, explored)
        except _Timeout:
            fallback = partitioned_dispatch(task, analysis)
            return ExactResult(analysis.width, fallback, explored[0],
                               ExactStatus.TIMED_OUT)
        if witness is not None:
            return ExactResult(m, witness, explored[0], ExactStatus.OPTIMAL)
    raise AssertionError("width processors always admit a partitioned schedule")


def _search(
    task: DagTask,
    analysis,
    m: int,
    deadline_clock: float | None,
    explored: list[int],
) -> Schedule | None:
    n = task.n
    wcet = task.wcet
    deadline = task.deadline
    lst = analysis.lst
    est = analysis.est
    preds = task.preds
    succs = task.succs
    total_work = task.total_wcet

    placement: list[tuple[int, int, int]] = []  # (node, proc, start)
    finish = [0] * n
    proc_free = [0] * m
    used = [False] * m
    failed: set[tuple] = set()

    def state_key(scheduled: int) -> tuple:
        open_finishes = tuple(
            finish[v] for v in range(n)
            if (scheduled >> v) & 1 and any(not (scheduled >> w) & 1 for w in succs[v])
        )
        return (scheduled, tuple(sorted(proc_free)), open_finishes)

    def recurse(scheduled: int, count: int, remaining: int) -> bool:
        explored[0] += 1
        if deadline_clock is not None and time.monotonic() > deadline_clock:
            raise _Timeout
        if count == n:
            return True
        key = state_key(scheduled)
        if key in failed:
            return False
        # Capacity: remaining work must fit in the residual processor time.
        if sum(max(0, deadline - f) for f in proc_free) < remaining:
            failed.add(key)
            return False
        min_free = min(proc_free)
        ready = []
        for v in range(n):
            if (scheduled >> v) & 1:
                continue
            base = est[v]
            blocked = False
            for p in preds[v]:
                if (scheduled >> p) & 1:
                    if finish[p] > base:
                        base = finish[p]
                else:
                    blocked = True
            # Machine availability and pred finishes only grow, so a node
            # already past its latest start can never recover.
            if max(base, min_free) > lst[v]:
                failed.add(key)
                return False
            if not blocked:
                ready.append((lst[v], v, base))
        ready.sort()
        for _, v, base in ready:
            seen_frees: set[int] = set()
            fresh_done = False
            for k in range(m):
                if not used[k]:
                    if fresh_done:
                        continue  # unused processors are interchangeable
                    fresh_done = True
                elif proc_free[k] in seen_frees:
                    continue  # identical machines with equal availability
                else:
                    seen_frees.add(proc_free[k])
                start = base if base > proc_free[k] else proc_free[k]
                if start > lst[v]:
                    continue
                prev_free, prev_used = proc_free[k], used[k]
                proc_free[k] = start + wcet[v]
                used[k] = True
                finish[v] = start + wcet[v]
                placement.append((v, k, start))
                if recurse(scheduled | (1 << v), count + 1, remaining - wcet[v]):
                    return True
                placement.pop()
                proc_free[k] = prev_free
                used[k] = prev_used
        failed.add(key)
        return False

    if not recurse(0, 0, total_work):
        return None

    start_times = [0] * n
    proc_of = [0] * n
    for v, k, s in placement:
        start_times[v] = s
        proc_of[v] = k
    per_proc: list[list[int]] = [[] for _ in range(m)]
    for v in sorted(range(n), key=lambda v: (start_times[v], start_times[v] + wcet[v], v)):
        per_proc[proc_of[v]].append(v)
    finishes = tuple(start_times[v] + wcet[v] for v in range(n))
    return Schedule(
        processors=m,
        assignment=tuple(tuple(p) for p in per_proc),
        start=tuple(start_times),
        finish=finishes,
        makespan=max(finishes),
    )


def verify_optimality_gap(task: DagTask, alg_processors: int, exact: ExactResult) -> Fraction:
    """(alg - opt) / opt as an exact rational; requires an optimal result."""
    if exact.status is not ExactStatus.OPTIMAL:
        raise NotOptimalError("gap requested against a non-optimal result")
    return Fraction(alg_processors - exact.min_processors, exact.min_processors)


# -- LP export ---------------------------------------------------------------------


def export_milp_lp(task: DagTask) -> str:
    """CPLEX-LP encoding of the processor-minimization program.

    Variables: x_i_k (node i on processor k), y_k (processor k used),
    g_i_j (i after j on a shared processor, unordered pairs i < j),
    f_i (finish time). Processor slots k = 0..W-1; big-M constants
    M1 = M2 = deadline + total WCET.
    """
    analysis = analyze(task)
    n = task.n
    m = analysis.width
    big = task.deadline + task.total_wcet
    lines = ["Minimize", " obj: " + " + ".join(f"y_{k}" for k in range(m))]
    lines.append("Subject To")
    for i in range(n):
        terms = " + ".join(f"x_{i}_{k}" for k in range(m))
        lines.append(f" sole_proc_{i}: {terms} = 1")
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(m):
                # f_i <= f_j - C_j + M1 g_ij + M2 (2 - x_ik - x_jk)
                lines.append(
                    f" exe_order_a_{i}_{j}_{k}: f_{i} - f_{j} - {big} g_{i}_{j}"
                    f" + {big} x_{i}_{k} + {big} x_{j}_{k} <= {2 * big - task.wcet[j]}"
                )
                # f_j <= f_i - C_i + M1 (1 - g_ij) + M2 (2 - x_ik - x_jk)
                lines.append(
                    f" exe_order_b_{i}_{j}_{k}: f_{j} - f_{i} + {big} g_{i}_{j}"
                    f" + {big} x_{i}_{k} + {big} x_{j}_{k} <= {3 * big - task.wcet[i]}"
                )
    for i in range(n):
        lines.append(f" start_time_{i}: f_{i} >= {task.wcet[i]}")
    for i in range(n):
        lines.append(f" finish_time_{i}: f_{i} <= {task.deadline}")
    for idx, (i, j) in enumerate(sorted(task.edges)):
        lines.append(f" precedence_{idx}: f_{i} - f_{j} <= {-task.wcet[j]}")
    for i in range(n):
        for k in range(m):
            lines.append(f" busy_proc_{i}_{k}: x_{i}_{k} - y_{k} <= 0")
    lines.append("Bounds")
    for i in range(n):
        lines.append(f" 0 <= f_{i} <= {task.deadline}")
    lines.append("Binaries")
    names = [f"x_{i}_{k}" for i in range(n) for k in range(m)]
    names += [f"y_{k}" for k in range(m)]
    names += [f"g_{i}_{j}" for i in range(n) for j in range(i + 1, n)]
    lines.append(" " + " ".join(names))
    lines.append("End")
    return "\n".join(lines) + "\n"
