"""The edge-generation loop and its policies.

Starting from a task whose length fits the deadline, the loop repeatedly
asks a policy for an eligible edge, inserts it, and recomputes the
graph attributes, the action mask, and the processor lower bound. It
stops when the mask empties or the width meets the lower bound; the
final width is the processor count the task is scheduled on.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Protocol, Sequence

from .analysis import (
    GraphAnalysis,
    analyze,
    cover_to_next,
    length_with_edge,
    tc_with_edge,
    width_with_edge,
)
from .errors import EmptySubsetError, InfeasibleDeadlineError, PolicyProtocolError
from .masks import EdgeMask, combined_mask
from .task import DagTask


@dataclass(frozen=True)
class EgsState:
    """One step of the loop: current graph, attributes, mask, bound."""

    task: DagTask
    analysis: GraphAnalysis
    mask: EdgeMask
    lower_bound: int
    step: int

    def eligible_edges(self) -> tuple[tuple[int, int], ...]:
        """Eligible (i, j) pairs in row-major order."""
        return tuple(self.mask.combined.pairs())


@dataclass(frozen=True)
class PolicyDecision:
    edge: tuple[int, int]
    confidence: float = 1.0


class TerminationReason(Enum):
    MASK_EMPTY = "mask_empty"
    LOWER_BOUND_REACHED = "lower_bound_reached"


@dataclass(frozen=True)
class EgsResult:
    final_graph: DagTask
    added_edges: tuple[tuple[int, int], ...]
    width_history: tuple[int, ...]
    processors: int
    terminated_by: TerminationReason
    reward_total: int
    lower_bound: int


class Policy(Protocol):
    def __call__(self, state: EgsState, rng: random.Random) -> PolicyDecision: ...


# -- lower bound ---------------------------------------------------------------


def lower_bound_subset(
    nodes: Iterable[int],
    est: Sequence[int],
    lft: Sequence[int],
    wcet: Sequence[int],
) -> int | float:
    """Workload-over-window processor floor for a node subset.

    ceil(sum of WCETs / (max LFT - min EST)); infinity when the window
    is empty but work remains.
    """
    nodes = list(nodes)
    if not nodes:
        raise EmptySubsetError("lower bound of an empty subset")
    work = sum(wcet[i] for i in nodes)
    window = max(lft[i] for i in nodes) - min(est[i] for i in nodes)
    if work == 0:
        return 0
    if window <= 0:
        return math.inf
    return -(-work // window)


def lower_bound(task: DagTask, analysis: GraphAnalysis) -> int:
    """Processor floor: the larger of the whole-graph bound and the bound
    over the maximal-lateral-width nodes, never below 1."""
    whole = lower_bound_subset(range(task.n), analysis.est, analysis.lft, task.wcet)
    hot = [i for i in range(task.n) if analysis.lw[i] == analysis.width - 1]
    best = whole
    if hot:
        best = max(best, lower_bound_subset(hot, analysis.est, analysis.lft, task.wcet))
    if math.isinf(best):
        raise InfeasibleDeadlineError("zero scheduling window with pending work")
    return max(1, int(best))


def mdp_reward(prev_width: int, new_width: int) -> int:
    """Per-step reward: the width reduction achieved by the added edge."""
    return prev_width - new_width


# -- built-in policies ------------------------------------------------------------


def greedy_policy(state: EgsState, rng: random.Random | None = None) -> PolicyDecision:
    """One-step lookahead: best width reduction, then least length increase,
    then lowest (i, j). Deterministic."""
    tc = state.analysis.tc
    eligible = state.eligible_edges()
    if not eligible:
        raise PolicyProtocolError("greedy policy called with an empty mask")
    seed = cover_to_next(state.analysis.path_cover, state.task.n)
    widths = [width_with_edge(tc, i, j, seed) for i, j in eligible]
    best_width = min(widths)
    best: tuple[int, int, int] | None = None
    for (i, j), w2 in zip(eligible, widths):
        if w2 != best_width:
            continue
        key = (length_with_edge(state.task, i, j), i, j)
        if best is None or key < best:
            best = key
    assert best is not None
    return PolicyDecision((best[1], best[2]), 1.0)


def random_policy(state: EgsState, rng: random.Random) -> PolicyDecision:
    """Uniform choice among the eligible edges, reproducible from the rng."""
    eligible = state.eligible_edges()
    if not eligible:
        raise PolicyProtocolError("random policy called with an empty mask")
    edge = eligible[rng.randrange(len(eligible))]
    return PolicyDecision(edge, 1.0 / len(eligible))


# -- the loop ---------------------------------------------------------------------


def egs_run(
    task: DagTask,
    policy: Callable[[EgsState, random.Random], PolicyDecision],
    rng_seed: int = 0,
) -> EgsResult:
    """Run the edge-generation loop to termination.

    Raises InfeasibleDeadlineError when the task's length already exceeds
    the deadline, and PolicyProtocolError when the policy returns an edge
    the mask forbids. If the policy object has an ``episode_end`` method
    it is invoked with the total reward at termination.
    """
    analysis = analyze(task)
    if analysis.length > task.deadline:
        raise InfeasibleDeadlineError(
            f"length {analysis.length} > deadline {task.deadline}")
    rng = random.Random(rng_seed)
    current = task
    mask = combined_mask(current, analysis)
    bound = lower_bound(current, analysis)
    width_history = [analysis.width]
    added: list[tuple[int, int]] = []
    step = 0
    max_steps = task.n * task.n

    while True:
        if not mask.combined.any():
            reason = TerminationReason.MASK_EMPTY
            break
        if bound >= analysis.width:
            reason = TerminationReason.LOWER_BOUND_REACHED
            break
        if step >= max_steps:  # unreachable: each step consumes a non-edge pair
            raise RuntimeError("edge-generation loop failed to terminate")
        state = EgsState(current, analysis, mask, bound, step)
        decision = policy(state, rng)
        i, j = decision.edge
        if not mask.combined.get(i, j):
            raise PolicyProtocolError(f"policy proposed masked edge ({i}, {j})")
        current = current.with_edge(i, j)
        tc = tc_with_edge(analysis.tc, i, j)
        analysis = analyze(current, tc=tc)
        if analysis.length > current.deadline:
            raise AssertionError("length mask admitted a deadline violation")
        if analysis.width > width_history[-1]:
            raise AssertionError("width increased after an edge insertion")
        mask = combined_mask(current, analysis)
        bound = lower_bound(current, analysis)
        width_history.append(analysis.width)
        added.append((i, j))
        step += 1

    reward_total = width_history[0] - width_history[-1]
    episode_end = getattr(policy, "episode_end", None)
    if callable(episode_end):
        episode_end(reward_total)
    return EgsResult(
        final_graph=current,
        added_edges=tuple(added),
        width_history=tuple(width_history),
        processors=width_history[-1],
        terminated_by=reason,
        reward_total=reward_total,
        lower_bound=bound,
    )


def scripted_policy(edges: Sequence[tuple[int, int]]) -> Callable[..., PolicyDecision]:
    """Policy that replays a fixed edge sequence (for tests and triage)."""
    queue = list(edges)

    def policy(state: EgsState, rng: random.Random) -> PolicyDecision:
        if not queue:
            raise PolicyProtocolError("scripted policy ran out of edges")
        return PolicyDecision(queue.pop(0), 1.0)

    return policy
