import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from egsched.analysis import analyze
from egsched.baselines import (
    PriorityRule,
    custom_priority,
    incremental_search,
    list_schedule,
    vertex_length_priority,
)
from egsched.dispatch import validate_schedule
from egsched.errors import InfeasibleDeadlineError
from egsched.exact import branch_and_bound
from egsched.task import load_and_normalize

from oracles import random_dag


def test_seven_node_vertex_length_priorities(seven_node):
    pa = vertex_length_priority(analyze(seven_node))
    assert pa.priority == (8, 8, 5, 4, 8, 6, 8)
    assert pa.rule is PriorityRule.VERTEX_LENGTH


def test_critical_path_nodes_share_max_priority(seven_node):
    result = analyze(seven_node)
    pa = vertex_length_priority(result)
    for v in result.critical_path:
        assert pa.priority[v] == result.length


def test_chain_priorities_all_equal():
    raw = {"wcet": [2, 3, 4], "edges": [[0, 1], [1, 2]], "deadline": 12, "period": 12}
    task = load_and_normalize(raw)
    pa = vertex_length_priority(analyze(task))
    assert set(pa.priority) == {9}


def test_custom_priority_rejects_nan():
    with pytest.raises(ValueError):
        custom_priority([float("nan")])


def test_seven_node_list_schedule_three_processors(seven_node):
    pa = vertex_length_priority(analyze(seven_node))
    schedule = list_schedule(seven_node, 3, pa)
    assert schedule.makespan == 8
    validate_schedule(seven_node, schedule)


def test_seven_node_list_schedule_two_processors(seven_node):
    pa = vertex_length_priority(analyze(seven_node))
    schedule = list_schedule(seven_node, 2, pa)
    # v3 outranks v4 (5 > 4), so the shared processor runs v3 first.
    assert schedule.start[2] < schedule.start[3]
    assert schedule.makespan <= 8
    validate_schedule(seven_node, schedule)


def test_list_schedule_single_processor(seven_node):
    pa = vertex_length_priority(analyze(seven_node))
    schedule = list_schedule(seven_node, 1, pa)
    assert schedule.makespan == seven_node.total_wcet


def test_seven_node_incremental_search(seven_node):
    assert incremental_search(seven_node) == 2


def test_chain_incremental_search():
    raw = {"wcet": [2, 3, 4], "edges": [[0, 1], [1, 2]], "deadline": 12, "period": 12}
    assert incremental_search(load_and_normalize(raw)) == 1


def test_incremental_search_infeasible():
    raw = {"wcet": [5, 5], "edges": [[0, 1]], "deadline": 8, "period": 8}
    with pytest.raises(InfeasibleDeadlineError):
        incremental_search(load_and_normalize(raw))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_list_schedule_respects_structure(seed):
    rng = random.Random(seed)
    task = random_dag(rng, max_n=10)
    pa = vertex_length_priority(analyze(task))
    m = rng.randint(1, max(1, analyze(task).width))
    schedule = list_schedule(task, m, pa)
    validate_schedule(task, schedule)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**9))
def test_work_conservation(seed):
    """No processor idles at an instant when some job is ready and waiting."""
    rng = random.Random(seed)
    task = random_dag(rng, max_n=9)
    pa = vertex_length_priority(analyze(task))
    m = rng.randint(1, 3)
    schedule = list_schedule(task, m, pa)
    for v in range(task.n):
        ready_time = max((schedule.finish[p] for p in task.preds[v]), default=0)
        if schedule.start[v] > ready_time:
            # Between becoming ready and starting, every processor is busy.
            for t in range(ready_time, schedule.start[v]):
                busy = sum(
                    1 for w in range(task.n)
                    if schedule.start[w] <= t < schedule.finish[w])
                assert busy == m


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**9))
def test_incremental_never_beats_exact(seed):
    task = random_dag(random.Random(seed), max_n=8)
    baseline = incremental_search(task)
    assert baseline >= branch_and_bound(task).min_processors
