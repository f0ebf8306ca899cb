"""Concrete schedules for trivially schedulable tasks.

Partitioned dispatch assigns each chain of the minimum path cover to its
own processor and starts every node at its earliest start time. The
global simulator dispatches ready jobs FIFO onto idle processors at
worst-case execution times, recording peak concurrency and queueing
delay. A feasible schedule converts back into a supergraph by chaining
same-processor nodes.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass

from .analysis import GraphAnalysis, analyze
from .errors import InfeasibleScheduleError, NotTriviallySchedulableError
from .task import DagTask


@dataclass(frozen=True)
class Schedule:
    """Start/finish times plus the per-processor execution orders."""

    processors: int
    assignment: tuple[tuple[int, ...], ...]
    start: tuple[int, ...]
    finish: tuple[int, ...]
    makespan: int

    def feasible(self, deadline: int) -> bool:
        return self.makespan <= deadline


@dataclass(frozen=True)
class QueueStats:
    max_active: int
    total_queue_delay: int


def validate_schedule(task: DagTask, schedule: Schedule) -> None:
    """Raise InfeasibleScheduleError on any structural violation."""
    n = task.n
    seen = sorted(v for procs in schedule.assignment for v in procs)
    if seen != list(range(n)):
        raise InfeasibleScheduleError("assignment does not cover each node once")
    for v in range(n):
        if schedule.start[v] < 0:
            raise InfeasibleScheduleError(f"node {v} starts before release")
        if schedule.finish[v] != schedule.start[v] + task.wcet[v]:
            raise InfeasibleScheduleError(f"node {v} is not run non-preemptively")
    for i, j in task.edges:
        if schedule.start[j] < schedule.finish[i]:
            raise InfeasibleScheduleError(f"edge ({i}, {j}) violated")
    for nodes in schedule.assignment:
        busy = sorted((schedule.start[v], schedule.finish[v]) for v in nodes)
        for (s1, f1), (s2, _) in zip(busy, busy[1:]):
            if s2 < f1:
                raise InfeasibleScheduleError("overlap on a shared processor")
    if schedule.makespan != max(schedule.finish, default=0):
        raise InfeasibleScheduleError("makespan does not match the last finish")


def partitioned_dispatch(task: DagTask, analysis: GraphAnalysis | None = None) -> Schedule:
    """Chain-per-processor schedule running every node at its earliest start.

    Requires trivial schedulability on M = width processors, i.e. the
    task's length must fit the deadline.
    """
    if analysis is None:
        analysis = analyze(task)
    if analysis.length > task.deadline:
        raise NotTriviallySchedulableError(
            f"length {analysis.length} > deadline {task.deadline}")
    start = analysis.est
    finish = analysis.eft
    return Schedule(
        processors=analysis.width,
        assignment=analysis.path_cover,
        start=start,
        finish=finish,
        makespan=analysis.length,
    )


def global_simulate(
    task: DagTask,
    processors: int,
    tie_rng: random.Random | None = None,
) -> tuple[Schedule, QueueStats]:
    """Event-driven work-conserving execution at WCET on M processors.

    Jobs become ready when all predecessors finish and enter a FIFO
    queue (ready-time order, ties by node index, or shuffled by
    ``tie_rng`` to exercise order independence). An infeasible makespan
    is reported, not raised.
    """
    if processors < 1:
        raise ValueError("need at least one processor")
    n = task.n
    preds_left = [len(p) for p in task.preds]
    start = [-1] * n
    finish = [-1] * n
    proc_of = [-1] * n
    free_at = [0] * processors
    running: list[tuple[int, int, int]] = []  # (finish, node, proc)
    ready: list[int] = []
    queue_delay = 0
    max_active = 0
    ready_at = [0] * n

    def push_ready(nodes: list[int], now: int) -> None:
        if tie_rng is not None:
            tie_rng.shuffle(nodes)
        else:
            nodes.sort()
        for v in nodes:
            ready_at[v] = now
            ready.append(v)

    push_ready([v for v in range(n) if preds_left[v] == 0], 0)
    now = 0
    done = 0
    while done < n:
        # Dispatch wave at the current instant; zero-WCET jobs cascade.
        while ready:
            idle = [k for k in range(processors) if free_at[k] <= now]
            if not idle:
                break
            newly: list[int] = []
            for k in idle:
                if not ready:
                    break
                v = ready.pop(0)
                start[v] = now
                finish[v] = now + task.wcet[v]
                proc_of[v] = k
                queue_delay += now - ready_at[v]
                if task.wcet[v] == 0:
                    done += 1
                    for w in task.succs[v]:
                        preds_left[w] -= 1
                        if preds_left[w] == 0:
                            newly.append(w)
                else:
                    free_at[k] = finish[v]
                    running.append((finish[v], v, k))
            push_ready(newly, now)
        active = len(ready) + len(running)
        if active > max_active:
            max_active = active
        if done >= n:
            break
        # Advance to the next completion.
        running.sort()
        next_finish = running[0][0]
        now = next_finish
        newly = []
        while running and running[0][0] == now:
            _, v, _ = running.pop(0)
            done += 1
            for w in task.succs[v]:
                preds_left[w] -= 1
                if preds_left[w] == 0:
                    newly.append(w)
        push_ready(newly, now)

    per_proc: list[list[int]] = [[] for _ in range(processors)]
    for v in sorted(range(n), key=lambda v: (start[v], finish[v], v)):
        per_proc[proc_of[v]].append(v)
    makespan = max(finish)
    schedule = Schedule(
        processors=processors,
        assignment=tuple(tuple(p) for p in per_proc),
        start=tuple(start),
        finish=tuple(finish),
        makespan=makespan,
    )
    return schedule, QueueStats(max_active=max_active, total_queue_delay=queue_delay)


def schedule_to_supergraph(task: DagTask, schedule: Schedule) -> DagTask:
    """Add the schedule's same-processor chains as precedence edges.

    The result is trivially schedulable on the schedule's processor
    count; that is checked and enforced.
    """
    validate_schedule(task, schedule)
    if not schedule.feasible(task.deadline):
        raise InfeasibleScheduleError(
            f"makespan {schedule.makespan} > deadline {task.deadline}")
    super_task = task
    for nodes in schedule.assignment:
        ordered = sorted(nodes, key=lambda v: (schedule.start[v], schedule.finish[v], v))
        for a, b in zip(ordered, ordered[1:]):
            if (a, b) not in super_task.edges:
                super_task = super_task.with_edge(a, b)
    result = analyze(super_task)
    if result.width > schedule.processors or result.length > task.deadline:
        raise InfeasibleScheduleError("supergraph is not trivially schedulable")
    return super_task


# -- export ----------------------------------------------------------------------


def schedule_to_json(schedule: Schedule) -> str:
    """Per-processor `{proc: [{node, start, finish}, ...]}` mapping."""
    payload = {
        str(k): [
            {"node": v, "start": schedule.start[v], "finish": schedule.finish[v]}
            for v in nodes
        ]
        for k, nodes in enumerate(schedule.assignment)
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def schedule_to_gantt_csv(schedule: Schedule) -> str:
    """Plot-ready Gantt table: node, proc, start, finish."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["node", "proc", "start", "finish"])
    for k, nodes in enumerate(schedule.assignment):
        for v in nodes:
            writer.writerow([v, k, schedule.start[v], schedule.finish[v]])
    return buffer.getvalue()
