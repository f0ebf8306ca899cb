"""DAG task model: immutable normalized tasks plus file I/O.

A task couples a DAG of non-preemptive sub-tasks (WCET per node) with a
deadline and period, deadline <= period. Normalization guarantees a
single source and a single sink, adding zero-WCET dummy nodes when the
raw graph has several.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Mapping, Sequence

from .errors import (
    CyclicGraphError,
    EmptyGraphError,
    InvalidDeadlineError,
    TaskFormatError,
)


@dataclass(frozen=True)
class DagTask:
    """Immutable DAG task. Durations are integer ticks.

    Invariants (enforced by :func:`load_and_normalize` / :meth:`build`):
    acyclic, dense 0..n-1 indices, exactly one source and one sink,
    all WCETs >= 0, 0 < deadline <= period.
    """

    n: int
    wcet: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    deadline: int
    period: int
    source: int
    sink: int

    # -- derived adjacency (cached; instances are immutable) -----------------

    @cached_property
    def succs(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            out[i].append(j)
        return tuple(tuple(sorted(s)) for s in out)

    @cached_property
    def preds(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            out[j].append(i)
        return tuple(tuple(sorted(p)) for p in out)

    @cached_property
    def adjacency_rows(self) -> tuple[int, ...]:
        rows = [0] * self.n
        for i, j in self.edges:
            rows[i] |= 1 << j
        return tuple(rows)

    @cached_property
    def topo_order(self) -> tuple[int, ...]:
        return _topological_order(self.n, self.edges)

    @property
    def total_wcet(self) -> int:
        return sum(self.wcet)

    # -- construction --------------------------------------------------------

    @classmethod
    def build(
        cls,
        wcet: Sequence[int],
        edges: Sequence[tuple[int, int]],
        deadline: int,
        period: int,
    ) -> "DagTask":
        """Validate and construct a task that is already single-source/sink."""
        raw = {"wcet": list(wcet), "edges": [list(e) for e in edges],
               "deadline": deadline, "period": period}
        task = load_and_normalize(raw)
        if task.n != len(wcet):
            raise TaskFormatError(
                "graph has multiple sources or sinks; use load_and_normalize")
        return task

    def with_edge(self, i: int, j: int) -> "DagTask":
        """Return a copy with the precedence edge (i, j) inserted."""
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise TaskFormatError(f"edge ({i}, {j}) out of range")
        if i == j:
            raise CyclicGraphError(f"self loop ({i}, {j})")
        if (i, j) in self.edges:
            return self
        if _reaches(self.adjacency_rows, j, i):
            raise CyclicGraphError(f"edge ({i}, {j}) would close a cycle")
        edges = tuple(sorted(self.edges + ((i, j),)))
        return DagTask(self.n, self.wcet, edges, self.deadline, self.period,
                       self.source, self.sink)

    # -- serialization --------------------------------------------------------

    def to_raw(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "deadline": self.deadline,
            "period": self.period,
            "wcet": list(self.wcet),
            "edges": [list(e) for e in sorted(self.edges)],
        }

    def to_json(self) -> str:
        """Deterministic JSON: sorted keys, sorted edges, compact separators."""
        return json.dumps(self.to_raw(), sort_keys=True, separators=(",", ":")) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())


def _topological_order(n: int, edges: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    """Kahn's algorithm; raises CyclicGraphError. Ties broken by node index."""
    indeg = [0] * n
    succs: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        indeg[j] += 1
        succs[i].append(j)
    import heapq

    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order: list[int] = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for v in succs[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, v)
    if len(order) != n:
        raise CyclicGraphError("graph contains a directed cycle")
    return tuple(order)


def _reaches(adj_rows: Sequence[int], start: int, goal: int) -> bool:
    if start == goal:
        return True
    seen = 1 << start
    frontier = [start]
    goal_bit = 1 << goal
    while frontier:
        u = frontier.pop()
        row = adj_rows[u] & ~seen
        if row & goal_bit:
            return True
        seen |= row
        while row:
            low = row & -row
            frontier.append(low.bit_length() - 1)
            row ^= low
    return False


def _as_tick(value: Any, what: str) -> int:
    """Accept ints and integral floats (JSON numbers); reject the rest."""
    if isinstance(value, bool):
        raise TaskFormatError(f"{what} must be a number, got bool")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise TaskFormatError(f"{what} must be an integer tick, got {value!r}")


def load_and_normalize(raw: Mapping[str, Any]) -> DagTask:
    """Build a :class:`DagTask` from a raw node/edge/wcet/deadline description.

    Multiple sources get a zero-WCET dummy source prepended at index 0
    (existing indices shift by one); multiple sinks get a dummy sink
    appended at the last index.
    """
    if "wcet" not in raw:
        raise TaskFormatError("missing 'wcet'")
    wcet = [_as_tick(c, "wcet entry") for c in raw["wcet"]]
    n = len(wcet)
    if "n" in raw and _as_tick(raw["n"], "n") != n:
        raise TaskFormatError(f"n={raw['n']} disagrees with {n} wcet entries")
    if n == 0:
        raise EmptyGraphError("task has no nodes")
    if any(c < 0 for c in wcet):
        raise TaskFormatError("negative WCET")

    deadline = _as_tick(raw.get("deadline"), "deadline")
    period = _as_tick(raw.get("period", deadline), "period")
    if deadline <= 0 or deadline > period:
        raise InvalidDeadlineError(
            f"need 0 < deadline <= period, got D={deadline}, T={period}")

    edge_set: set[tuple[int, int]] = set()
    for pair in raw.get("edges", []):
        i, j = (_as_tick(pair[0], "edge src"), _as_tick(pair[1], "edge dst"))
        if not (0 <= i < n and 0 <= j < n):
            raise TaskFormatError(f"edge ({i}, {j}) out of range for n={n}")
        if i == j:
            raise CyclicGraphError(f"self loop at node {i}")
        edge_set.add((i, j))

    _topological_order(n, sorted(edge_set))  # raises on cycles

    has_pred = {j for _, j in edge_set}
    has_succ = {i for i, _ in edge_set}
    sources = [v for v in range(n) if v not in has_pred]
    sinks = [v for v in range(n) if v not in has_succ]

    if len(sources) > 1:
        # Prepend dummy source at index 0; shift every existing node by one.
        wcet = [0] + wcet
        edge_set = {(i + 1, j + 1) for i, j in edge_set}
        edge_set |= {(0, s + 1) for s in sources}
        sinks = [v + 1 for v in sinks]
        n += 1
    if len(sinks) > 1:
        wcet = wcet + [0]
        edge_set |= {(t, n) for t in sinks}
        n += 1

    edges = tuple(sorted(edge_set))
    has_pred = {j for _, j in edges}
    has_succ = {i for i, _ in edges}
    source = min(v for v in range(n) if v not in has_pred)
    sink = max(v for v in range(n) if v not in has_succ)
    return DagTask(n, tuple(wcet), edges, deadline, period, source, sink)


# -- file formats ------------------------------------------------------------

_DOT_ATTR = re.compile(r"^(\w+)\s*=\s*(\d+)$")
_DOT_NODE = re.compile(r"^(\d+)\s*\[\s*wcet\s*=\s*(\d+)\s*\]$")
_DOT_EDGE = re.compile(r"^(\d+)\s*->\s*(\d+)$")


def parse_dot(text: str) -> dict[str, Any]:
    """Parse a DOT-like edge list into a raw task description.

    Supported statements (';'-separated): ``deadline=8``, ``period=8``,
    ``3 [wcet=5]`` and ``0 -> 1``. The surrounding ``digraph name { }``
    wrapper and ``//`` comments are optional.
    """
    body = re.sub(r"//[^\n]*", "", text)
    m = re.search(r"\{(.*)\}", body, re.S)
    if m:
        body = m.group(1)
    attrs: dict[str, int] = {}
    wcets: dict[int, int] = {}
    edges: list[list[int]] = []
    for stmt in body.split(";"):
        stmt = stmt.strip()
        if not stmt:
            continue
        if m := _DOT_ATTR.match(stmt):
            attrs[m.group(1)] = int(m.group(2))
        elif m := _DOT_NODE.match(stmt):
            wcets[int(m.group(1))] = int(m.group(2))
        elif m := _DOT_EDGE.match(stmt):
            edges.append([int(m.group(1)), int(m.group(2))])
        else:
            raise TaskFormatError(f"unrecognized statement: {stmt!r}")
    mentioned = set(wcets) | {v for e in edges for v in e}
    if not mentioned:
        raise EmptyGraphError("no nodes in DOT input")
    n = max(mentioned) + 1
    raw: dict[str, Any] = {
        "wcet": [wcets.get(i, 0) for i in range(n)],
        "edges": edges,
    }
    if "deadline" in attrs:
        raw["deadline"] = attrs["deadline"]
    if "period" in attrs:
        raw["period"] = attrs["period"]
    return raw


def load_task(path: str | Path) -> DagTask:
    """Load a task file; JSON object or DOT-like edge list, sniffed."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{") or str(path).endswith(".json"):
        raw = json.loads(text)
    else:
        raw = parse_dot(text)
    return load_and_normalize(raw)
