"""List-scheduling baselines: priority rules and incremental processor search."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .analysis import GraphAnalysis, analyze
from .dispatch import Schedule
from .errors import InfeasibleDeadlineError
from .task import DagTask


class PriorityRule(Enum):
    VERTEX_LENGTH = "vertex-length"
    CUSTOM = "custom"


@dataclass(frozen=True)
class PriorityAssignment:
    priority: tuple[float, ...]
    rule: PriorityRule

    def __post_init__(self) -> None:
        if any(p != p or p in (float("inf"), float("-inf")) for p in self.priority):
            raise ValueError("priorities must be finite")


def vertex_length_priority(analysis: GraphAnalysis) -> PriorityAssignment:
    """Priority = length of the longest complete path through the node,
    i.e. eft + D - lft (higher is more urgent)."""
    deadline = max(analysis.lft)
    values = tuple(
        analysis.eft[i] + deadline - analysis.lft[i] for i in range(len(analysis.eft))
    )
    return PriorityAssignment(values, PriorityRule.VERTEX_LENGTH)


def custom_priority(values: Sequence[float]) -> PriorityAssignment:
    """Hook for plugging in other priority rules."""
    return PriorityAssignment(tuple(values), PriorityRule.CUSTOM)


def list_schedule(task: DagTask, processors: int, priorities: PriorityAssignment) -> Schedule:
    """Non-preemptive work-conserving list scheduler at WCET.

    At every dispatch instant the ready nodes are ordered by descending
    priority (ties by node index) and placed on idle processors.
    """
    if processors < 1:
        raise ValueError("need at least one processor")
    n = task.n
    prio = priorities.priority
    preds_left = [len(p) for p in task.preds]
    ready = [v for v in range(n) if preds_left[v] == 0]
    start = [-1] * n
    finish = [-1] * n
    proc_of = [-1] * n
    free_at = [0] * processors
    running: list[tuple[int, int]] = []  # (finish, node)
    now = 0
    done = 0
    while done < n:
        while ready:
            idle = [k for k in range(processors) if free_at[k] <= now]
            if not idle:
                break
            ready.sort(key=lambda v: (-prio[v], v))
            newly: list[int] = []
            for k in idle:
                if not ready:
                    break
                v = ready.pop(0)
                start[v] = now
                finish[v] = now + task.wcet[v]
                proc_of[v] = k
                if task.wcet[v] == 0:
                    done += 1
                    for w in task.succs[v]:
                        preds_left[w] -= 1
                        if preds_left[w] == 0:
                            newly.append(w)
                else:
                    free_at[k] = finish[v]
                    running.append((finish[v], v))
            ready.extend(newly)
        if done >= n:
            break
        running.sort()
        now = running[0][0]
        while running and running[0][0] == now:
            _, v = running.pop(0)
            done += 1
            for w in task.succs[v]:
                preds_left[w] -= 1
                if preds_left[w] == 0:
                    ready.append(w)

    per_proc: list[list[int]] = [[] for _ in range(processors)]
    for v in sorted(range(n), key=lambda v: (start[v], finish[v], v)):
        per_proc[proc_of[v]].append(v)
    return Schedule(
        processors=processors,
        assignment=tuple(tuple(p) for p in per_proc),
        start=tuple(start),
        finish=tuple(finish),
        makespan=max(finish),
    )


def incremental_search(task: DagTask, priorities: PriorityAssignment | None = None) -> int:
    """Smallest processor count whose list schedule meets the deadline.

    Counts are tried from 1 upward; with one processor per node every
    ready job runs immediately, so the search succeeds whenever the
    task's length fits the deadline at all.
    """
    if priorities is None:
        priorities = vertex_length_priority(analyze(task))
    for m in range(1, task.n + 1):
        schedule = list_schedule(task, m, priorities)
        if schedule.makespan <= task.deadline:
            return m
    raise InfeasibleDeadlineError(
        f"no processor count meets deadline {task.deadline}")
