"""Graph attributes of a DAG task: closure, length, width, timing, parallelism.

All attributes are exact integer quantities. The transitive closure is a
bitset-row Floyd-Warshall; widths come from maximum bipartite matching on
the closure (minimum path cover, Dilworth); timing attributes are the
fixed point of the forward/backward critical-path recurrences under the
deadline.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .bitmatrix import BoolMatrix, iter_bits
from .task import DagTask


@dataclass(frozen=True)
class GraphAnalysis:
    """Bundle of every per-task and per-node attribute the toolkit uses.

    The in/out widths are computed on first access; the edge-generation
    loop itself only consumes the eager attributes.
    """

    tc: BoolMatrix
    length: int
    width: int
    est: tuple[int, ...]
    eft: tuple[int, ...]
    lst: tuple[int, ...]
    lft: tuple[int, ...]
    lw: tuple[int, ...]
    path_cover: tuple[tuple[int, ...], ...]
    critical_path: tuple[int, ...]

    @cached_property
    def iw(self) -> tuple[int, ...]:
        return self._in_out_widths()[0]

    @cached_property
    def ow(self) -> tuple[int, ...]:
        return self._in_out_widths()[1]

    @cached_property
    def _chain_next(self) -> tuple[int, ...]:
        return cover_to_next(self.path_cover, self.tc.n)

    def _in_out_widths(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        n = self.tc.n
        full = (1 << n) - 1
        tct = self.tc.transpose()
        seed = self._chain_next
        iw, ow = [], []
        for i in range(n):
            bit = 1 << i
            iw.append(subgraph_width(self.tc, full & ~(self.tc.rows[i] | bit), seed))
            ow.append(subgraph_width(self.tc, full & ~(tct.rows[i] | bit), seed))
        return tuple(iw), tuple(ow)


# -- transitive closure --------------------------------------------------------


def transitive_closure(task: DagTask) -> BoolMatrix:
    """Strict reachability matrix: entry (i, j) iff i is an ancestor of j."""
    rows = list(task.adjacency_rows)
    n = task.n
    # Floyd-Warshall, one bitset OR per (k, i) pair with i -> k reachable.
    for k in range(n):
        bit = 1 << k
        row_k = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= row_k
    return BoolMatrix(n, tuple(rows))


def tc_with_edge(tc: BoolMatrix, i: int, j: int) -> BoolMatrix:
    """Closure after inserting edge (i, j): O(n) row updates."""
    gain = tc.rows[j] | (1 << j)
    bit_i = 1 << i
    rows = list(tc.rows)
    for x in range(tc.n):
        if x == i or rows[x] & bit_i:
            rows[x] |= gain
    return BoolMatrix(tc.n, tuple(rows))


# -- timing ---------------------------------------------------------------------


def timing_attributes(
    task: DagTask, tc: BoolMatrix | None = None
) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Fixed point of the EST/EFT/LST/LFT recurrences (init est=0, lft=D).

    A single pass in topological order reaches the fixed point the
    iterative scheme converges to within n sweeps.
    """
    n, wcet = task.n, task.wcet
    order = task.topo_order
    succs = task.succs
    est = [0] * n
    for u in order:
        fu = est[u] + wcet[u]
        for v in succs[u]:
            if fu > est[v]:
                est[v] = fu
    eft = [est[i] + wcet[i] for i in range(n)]
    lft = [task.deadline] * n
    for u in reversed(order):
        for v in succs[u]:
            bound = lft[v] - wcet[v]
            if bound < lft[u]:
                lft[u] = bound
    lst = [lft[i] - wcet[i] for i in range(n)]
    return tuple(est), tuple(eft), tuple(lst), tuple(lft)


def _critical_walk(task: DagTask, est: Sequence[int], eft: Sequence[int]) -> tuple[int, ...]:
    """One longest path: walk back from the sink through the lowest-index
    predecessor whose finish attains each node's start."""
    preds = task.preds
    path = [task.sink]
    while preds[path[-1]]:
        cur = path[-1]
        path.append(min(p for p in preds[cur] if eft[p] == est[cur]))
    path.reverse()
    return tuple(path)


def dag_length(task: DagTask, tc: BoolMatrix | None = None) -> tuple[int, tuple[int, ...]]:
    """Length of the longest complete path, plus one such path."""
    est, eft, _, _ = timing_attributes(task)
    return eft[task.sink], _critical_walk(task, est, eft)


def length_with_edge(task: DagTask, i: int, j: int) -> int:
    """Length of the graph after inserting edge (i, j), without rebuilding."""
    n, wcet = task.n, task.wcet
    succs = [list(s) for s in task.succs]
    succs[i].append(j)
    indeg = [0] * n
    for u in range(n):
        for v in succs[u]:
            indeg[v] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    est = [0] * n
    length = 0
    while stack:
        u = stack.pop()
        fu = est[u] + wcet[u]
        if fu > length:
            length = fu
        for v in succs[u]:
            if fu > est[v]:
                est[v] = fu
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return length


# -- width / minimum path cover ---------------------------------------------------


def _augment(u: int, cand: Sequence[int], match_l: list[int], match_r: list[int],
             visited: list[int]) -> bool:
    """Kuhn augmenting DFS from left node u over candidate bitmask rows."""
    while True:
        free = cand[u] & ~visited[0]
        if not free:
            return False
        v = (free & -free).bit_length() - 1
        visited[0] |= 1 << v
        if match_r[v] < 0 or _augment(match_r[v], cand, match_l, match_r, visited):
            match_l[u] = v
            match_r[v] = u
            return True


def _max_matching_size(cand: Sequence[int], lefts: int,
                       seed_next: Sequence[int] | None = None,
                       alive: int = -1) -> int:
    """Matching cardinality on the bipartite copy graph (size only).

    ``seed_next`` warm-starts from a known matching (chain-successor map);
    pairs surviving the ``alive`` restriction are kept, the rest augmented.
    """
    n = len(cand)
    match_l = [-1] * n
    match_r = [-1] * n
    size = 0
    if seed_next is not None:
        for u in iter_bits(lefts):
            v = seed_next[u]
            if v >= 0 and (alive >> v) & 1:
                match_l[u] = v
                match_r[v] = u
                size += 1
    for u in iter_bits(lefts):
        if match_l[u] < 0 and cand[u] and _augment(u, cand, match_l, match_r, [0]):
            size += 1
    return size


def cover_to_next(cover: Sequence[Sequence[int]], n: int) -> tuple[int, ...]:
    """Chain-successor map of a path cover (-1 past each chain end)."""
    nxt = [-1] * n
    for chain in cover:
        for a, b in zip(chain, chain[1:]):
            nxt[a] = b
    return tuple(nxt)


def subgraph_width(tc: BoolMatrix, alive: int,
                   seed_next: Sequence[int] | None = None) -> int:
    """Width of the induced suborder on the nodes of the ``alive`` bitmask."""
    total = alive.bit_count()
    if total == 0:
        return 0
    cand = [tc.rows[u] & alive if (alive >> u) & 1 else 0 for u in range(tc.n)]
    return total - _max_matching_size(cand, alive, seed_next, alive)


def dag_width(task: DagTask, tc: BoolMatrix) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Width and a minimum chain cover of the reachability order.

    The matching is seeded over direct edges first, then completed over
    the closure, so covers prefer paths of the original graph. Chains
    are reported in ascending order of their first node.
    """
    n = task.n
    match_l = [-1] * n
    match_r = [-1] * n
    direct = task.adjacency_rows
    for u in range(n):
        if direct[u]:
            _augment(u, direct, match_l, match_r, [0])
    for u in range(n):
        if match_l[u] < 0 and tc.rows[u]:
            _augment(u, tc.rows, match_l, match_r, [0])
    chains = []
    for root in range(n):
        if match_r[root] >= 0:
            continue
        chain = [root]
        while match_l[chain[-1]] >= 0:
            chain.append(match_l[chain[-1]])
        chains.append(tuple(chain))
    width = len(chains)
    return width, tuple(chains)


def width_with_edge(tc: BoolMatrix, i: int, j: int,
                    seed_next: Sequence[int] | None = None) -> int:
    """Width after inserting edge (i, j) into a graph with closure ``tc``."""
    tc2 = tc_with_edge(tc, i, j)
    return subgraph_width(tc2, (1 << tc2.n) - 1, seed_next)


# -- parallelism -------------------------------------------------------------------


def _lateral_widths(task: DagTask, tc: BoolMatrix,
                    seed_next: Sequence[int] | None = None) -> tuple[int, ...]:
    n = task.n
    full = (1 << n) - 1
    tct = tc.transpose()
    return tuple(
        subgraph_width(tc, full & ~(tct.rows[i] | tc.rows[i] | (1 << i)), seed_next)
        for i in range(n)
    )


def parallelism_attributes(
    task: DagTask, tc: BoolMatrix,
    seed_next: Sequence[int] | None = None,
) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Lateral/in/out width per node (width after removing relatives)."""
    n = task.n
    full = (1 << n) - 1
    tct = tc.transpose()
    lw, iw, ow = [], [], []
    for i in range(n):
        bit = 1 << i
        anc = tct.rows[i]
        des = tc.rows[i]
        lw.append(subgraph_width(tc, full & ~(anc | des | bit), seed_next))
        iw.append(subgraph_width(tc, full & ~(des | bit), seed_next))
        ow.append(subgraph_width(tc, full & ~(anc | bit), seed_next))
    return tuple(lw), tuple(iw), tuple(ow)


# -- one-shot bundle -----------------------------------------------------------------


def analyze(task: DagTask, tc: BoolMatrix | None = None) -> GraphAnalysis:
    """Compute every attribute of the task (closure reused when supplied)."""
    if tc is None:
        tc = transitive_closure(task)
    est, eft, lst, lft = timing_attributes(task, tc)
    width, cover = dag_width(task, tc)
    lw = _lateral_widths(task, tc, cover_to_next(cover, task.n))
    return GraphAnalysis(
        tc=tc,
        length=eft[task.sink],
        width=width,
        est=est,
        eft=eft,
        lst=lst,
        lft=lft,
        lw=lw,
        path_cover=cover,
        critical_path=_critical_walk(task, est, eft),
    )
