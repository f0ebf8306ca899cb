"""Independent brute-force oracles the real implementations are checked against.

Everything here recomputes from first principles (set-based DFS, path
enumeration, subset enumeration, exhaustive search) and deliberately
shares no code with the package.
"""

from __future__ import annotations

import random
from itertools import combinations

from egsched.task import DagTask, load_and_normalize


def closure_sets(n: int, edges) -> list[set[int]]:
    """Strict descendants per node, by per-node DFS."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
    out = []
    for s in range(n):
        seen: set[int] = set()
        stack = list(adj[s])
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(adj[u])
        out.append(seen)
    return out


def all_complete_paths(task: DagTask):
    """Every source-to-sink node sequence, by DFS."""
    paths = []

    def walk(node, acc):
        acc = acc + [node]
        if node == task.sink:
            paths.append(acc)
            return
        for nxt in task.succs[node]:
            walk(nxt, acc)

    walk(task.source, [])
    return paths


def length_by_enumeration(task: DagTask) -> int:
    return max(sum(task.wcet[v] for v in p) for p in all_complete_paths(task))


def max_antichain_brute(n: int, closure: list[set[int]], alive=None) -> int:
    """Largest pairwise-unreachable subset, by decreasing-size enumeration."""
    nodes = sorted(alive) if alive is not None else list(range(n))
    for size in range(len(nodes), 0, -1):
        for combo in combinations(nodes, size):
            if all(b not in closure[a] and a not in closure[b]
                   for a, b in combinations(combo, 2)):
                return size
    return 0


def exact_min_processors(task: DagTask) -> int:
    """Exhaustive minimum processor count meeting the deadline.

    Searches placement sequences (any precedence-respecting order) times
    processor choices, with memoized dead states but no bound-based
    pruning beyond the deadline itself.
    """
    n = task.n
    deadline = task.deadline
    wcet = task.wcet
    preds = task.preds
    succs = task.succs

    def feasible(m: int) -> bool:
        finish = [0] * n
        free = [0] * m
        dead: set[tuple] = set()

        def key(scheduled: int) -> tuple:
            open_f = tuple(
                finish[v] for v in range(n)
                if (scheduled >> v) & 1
                and any(not (scheduled >> w) & 1 for w in succs[v]))
            return (scheduled, tuple(sorted(free)), open_f)

        def rec(scheduled: int, count: int) -> bool:
            if count == n:
                return True
            k0 = key(scheduled)
            if k0 in dead:
                return False
            for v in range(n):
                if (scheduled >> v) & 1:
                    continue
                if any(not (scheduled >> p) & 1 for p in preds[v]):
                    continue
                base = max((finish[p] for p in preds[v]), default=0)
                fresh_seen = False
                for k in range(m):
                    if free[k] == 0:
                        if fresh_seen:
                            continue
                        fresh_seen = True
                    start = max(base, free[k])
                    if start + wcet[v] > deadline:
                        continue
                    old = free[k]
                    free[k] = start + wcet[v] if wcet[v] else free[k]
                    finish[v] = start + wcet[v]
                    if rec(scheduled | (1 << v), count + 1):
                        return True
                    free[k] = old
            dead.add(k0)
            return False

        return rec(0, 0)

    for m in range(1, n + 1):
        if feasible(m):
            return m
    raise AssertionError("n processors always suffice when length <= deadline")


def random_dag(rng: random.Random, max_n: int = 12, p: float = 0.3,
               max_wcet: int = 9, slack: float | None = None) -> DagTask:
    """Random normalized task; deadline = length + uniform slack."""
    n = rng.randint(1, max_n)
    edges = [[i, j] for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    wcet = [rng.randint(0, max_wcet) for _ in range(n)]
    raw = {"wcet": wcet, "edges": edges, "deadline": 1, "period": 1}
    probe = load_and_normalize({**raw, "deadline": 10 ** 9, "period": 10 ** 9})
    length = length_by_enumeration(probe) if probe.n <= 14 else None
    if length is None:
        from egsched.analysis import analyze
        length = analyze(probe).length
    extra = rng.randint(0, max(1, length)) if slack is None else int(length * slack)
    deadline = max(1, length + extra)
    return load_and_normalize({"wcet": list(probe.wcet),
                               "edges": [list(e) for e in probe.edges],
                               "deadline": deadline, "period": deadline})
