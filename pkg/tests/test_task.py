import json

import pytest

from egsched.errors import (
    CyclicGraphError,
    EmptyGraphError,
    InvalidDeadlineError,
    TaskFormatError,
)
from egsched.task import DagTask, load_and_normalize, load_task, parse_dot

from conftest import SEVEN_NODE_RAW


def test_seven_node_loads_unchanged(seven_node):
    assert seven_node.n == 7
    assert seven_node.source == 0
    assert seven_node.sink == 6
    assert seven_node.wcet == (0, 5, 4, 3, 3, 1, 0)
    assert len(seven_node.edges) == 9


def test_single_node_task():
    task = load_and_normalize({"wcet": [3], "deadline": 5, "period": 5})
    assert task.n == 1
    assert task.source == task.sink == 0


def test_two_parallel_chains_get_dummies():
    raw = {"wcet": [1, 2, 3, 4], "edges": [[0, 1], [2, 3]], "deadline": 9, "period": 9}
    task = load_and_normalize(raw)
    assert task.n == 6
    assert task.wcet[task.source] == 0
    assert task.wcet[task.sink] == 0
    assert task.source == 0 and task.sink == 5
    # Former sources hang off the dummy source, former sinks feed the dummy sink.
    assert set(task.succs[0]) == {1, 3}
    assert set(task.preds[5]) == {2, 4}


def test_multiple_sinks_only():
    raw = {"wcet": [1, 1, 1], "edges": [[0, 1], [0, 2]], "deadline": 3, "period": 3}
    task = load_and_normalize(raw)
    assert task.n == 4
    assert task.sink == 3
    assert task.source == 0


def test_cycle_rejected():
    raw = {"wcet": [1, 1], "edges": [[0, 1], [1, 0]], "deadline": 5, "period": 5}
    with pytest.raises(CyclicGraphError):
        load_and_normalize(raw)
    with pytest.raises(CyclicGraphError):
        load_and_normalize({"wcet": [1], "edges": [[0, 0]], "deadline": 1, "period": 1})


def test_deadline_validation():
    with pytest.raises(InvalidDeadlineError):
        load_and_normalize({"wcet": [1], "deadline": 0, "period": 5})
    with pytest.raises(InvalidDeadlineError):
        load_and_normalize({"wcet": [1], "deadline": 6, "period": 5})


def test_empty_graph():
    with pytest.raises(EmptyGraphError):
        load_and_normalize({"wcet": [], "deadline": 1, "period": 1})


def test_bad_edge_and_wcet():
    with pytest.raises(TaskFormatError):
        load_and_normalize({"wcet": [1, 1], "edges": [[0, 5]], "deadline": 2, "period": 2})
    with pytest.raises(TaskFormatError):
        load_and_normalize({"wcet": [-1], "deadline": 2, "period": 2})
    with pytest.raises(TaskFormatError):
        load_and_normalize({"wcet": [1.5], "deadline": 2, "period": 2})


def test_json_round_trip(tmp_path, seven_node):
    path = tmp_path / "t.json"
    seven_node.write(path)
    again = load_task(path)
    assert again == seven_node
    assert json.loads(path.read_text())["n"] == 7


def test_json_deterministic(seven_node):
    assert seven_node.to_json() == load_and_normalize(SEVEN_NODE_RAW).to_json()


def test_dot_loader(tmp_path):
    text = """
    digraph t {
      deadline=8; period=8;
      0 [wcet=0]; 1 [wcet=5]; 2 [wcet=4];
      0 -> 1; 0 -> 2; 1 -> 2;
    }
    """
    path = tmp_path / "t.dot"
    path.write_text(text)
    task = load_task(path)
    assert task.n == 3
    assert task.wcet == (0, 5, 4)
    assert task.deadline == 8


def test_dot_rejects_garbage():
    with pytest.raises(TaskFormatError):
        parse_dot("digraph { 0 -> ; }")


def test_with_edge_immutable(seven_node):
    extended = seven_node.with_edge(2, 3)
    assert (2, 3) in extended.edges
    assert (2, 3) not in seven_node.edges
    assert extended.with_edge(2, 3) == extended
    with pytest.raises(CyclicGraphError):
        extended.with_edge(3, 2)


def test_build_rejects_multi_source():
    with pytest.raises(TaskFormatError):
        DagTask.build([1, 1], [], 5, 5)
