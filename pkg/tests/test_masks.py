import random

from hypothesis import given, settings
from hypothesis import strategies as st

from egsched.analysis import analyze, dag_length, transitive_closure
from egsched.masks import (
    combined_mask,
    cycle_mask,
    length_mask,
    mask_to_ascii,
    redundancy_mask,
    width_mask,
)
from egsched.task import load_and_normalize

from oracles import random_dag


def test_seven_node_redundancy(seven_node):
    tc = transitive_closure(seven_node)
    m_r = redundancy_mask(tc)
    assert not m_r.get(0, 5)  # target already reachable
    assert m_r.count() == 49 - 15


def test_seven_node_cycle(seven_node):
    tc = transitive_closure(seven_node)
    m_c = cycle_mask(tc)
    assert not m_c.get(6, 2)  # would close a cycle
    assert all(not m_c.get(i, i) for i in range(7))


def test_seven_node_length(seven_node):
    result = analyze(seven_node)
    m_l = length_mask(result.eft, result.lst)
    assert not m_l.get(1, 2)  # eft 5 > lst 3
    assert m_l.get(3, 2)      # eft 3 <= lst 3


def test_seven_node_width(seven_node):
    result = analyze(seven_node)
    m_w = width_mask(result.lw, result.width)
    assert not m_w.get(4, 5)  # lateral width 1 != 2
    hot = {1, 2, 3, 4}
    assert set(m_w.pairs()) == {(i, j) for i in hot for j in hot}


def test_seven_node_combined(seven_node):
    mask = combined_mask(seven_node, analyze(seven_node))
    assert set(mask.combined.pairs()) == {(2, 3), (3, 2), (2, 4), (3, 4)}


def test_fig6c_state_empty(nine_node):
    extended = nine_node.with_edge(2, 3)
    mask = combined_mask(extended, analyze(extended))
    assert not mask.combined.any()


def test_chain_combined_empty():
    raw = {"wcet": [1, 1, 1], "edges": [[0, 1], [1, 2]], "deadline": 9, "period": 9}
    task = load_and_normalize(raw)
    mask = combined_mask(task, analyze(task))
    # Width-1 graph: the width mask admits everything, the rest kill it.
    assert mask.m_w.count() == 9
    assert not mask.combined.any()


def test_zero_wcet_pair_with_slack_passes_length():
    raw = {"wcet": [0, 5, 0, 0], "edges": [[0, 1], [0, 2], [1, 3], [2, 3]],
           "deadline": 9, "period": 9}
    task = load_and_normalize(raw)
    result = analyze(task)
    m_l = length_mask(result.eft, result.lst)
    assert m_l.get(2, 1)  # zero-duration node with full slack


def test_ascii_dump_mentions_every_mask(seven_node):
    text = mask_to_ascii(combined_mask(seven_node, analyze(seven_node)))
    for label in ("redundancy", "cycle", "length", "width", "combined"):
        assert f"[{label}]" in text
    assert text.count("\n") >= 5 * 7


# -- necessity and exactness properties -----------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_length_mask_exact_in_both_directions(seed):
    """Insertion keeps length <= deadline iff the mask bit is set."""
    task = random_dag(random.Random(seed), max_n=9)
    result = analyze(task)
    assert result.length <= task.deadline
    mask = combined_mask(task, result)
    for i in range(task.n):
        for j in range(task.n):
            if i == j or not (mask.m_r.get(i, j) and mask.m_c.get(i, j)):
                continue
            new_length = dag_length(task.with_edge(i, j))[0]
            assert mask.m_l.get(i, j) == (new_length <= task.deadline)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_width_reduction_links_max_lateral_width_nodes(seed):
    """Any single edge that lowers the width makes the new closure connect
    two distinct nodes of maximal lateral width (necessity)."""
    task = random_dag(random.Random(seed), max_n=9)
    result = analyze(task)
    hot = [v for v in range(task.n) if result.lw[v] == result.width - 1]
    for i in range(task.n):
        for j in range(task.n):
            if i == j or result.tc.get(i, j) or result.tc.get(j, i):
                continue
            after = analyze(task.with_edge(i, j))
            if after.width < result.width:
                assert any(after.tc.get(a, b)
                           for a in hot for b in hot if a != b)


def test_width_reduction_endpoints_can_miss_max_lateral_width():
    """Regression shape: a width-reducing edge whose own endpoints are not
    both at maximal lateral width (the necessity holds only through the
    closure). Found by brute force; pins the distinction."""
    raw = {
        "wcet": [0, 4, 0, 4, 5, 6, 0, 7, 9, 0],
        "edges": [[0, 1], [0, 2], [0, 5], [1, 6], [2, 3], [2, 4], [2, 6],
                  [3, 6], [3, 7], [3, 8], [4, 6], [4, 7], [5, 6], [6, 7],
                  [6, 8], [7, 9], [8, 9]],
        "deadline": 15, "period": 15,
    }
    task = load_and_normalize(raw)
    result = analyze(task)
    assert result.width == 4
    assert result.lw[2] != result.width - 1
    after = analyze(task.with_edge(1, 2))
    assert after.width == 3
    hot = [v for v in range(task.n) if result.lw[v] == result.width - 1]
    assert any(after.tc.get(a, b) for a in hot for b in hot if a != b)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_cycle_mask_sound(seed):
    task = random_dag(random.Random(seed), max_n=9)
    tc = transitive_closure(task)
    mask = redundancy_mask(tc) & cycle_mask(tc)
    for i, j in mask.pairs():
        task.with_edge(i, j)  # raises CyclicGraphError if unsafe


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_combined_is_conjunction(seed):
    task = random_dag(random.Random(seed), max_n=9)
    mask = combined_mask(task, analyze(task))
    for i, j in mask.combined.pairs():
        assert mask.m_r.get(i, j)
        assert mask.m_c.get(i, j)
        assert mask.m_l.get(i, j)
        assert mask.m_w.get(i, j)
    assert not (mask.combined & analyze(task).tc).any()
