import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from egsched.task import DagTask, load_and_normalize

SEVEN_NODE_RAW = {
    "n": 7,
    "wcet": [0, 5, 4, 3, 3, 1, 0],
    "edges": [[0, 1], [0, 2], [0, 3], [1, 4], [1, 5], [2, 5], [3, 5], [4, 6], [5, 6]],
    "deadline": 8,
    "period": 8,
}

NINE_NODE_RAW = {
    "n": 9,
    "wcet": [0, 1, 2, 2, 2, 1, 2, 2, 0],
    "edges": [[0, 1], [0, 2], [0, 3], [1, 4], [2, 4], [3, 4],
              [4, 5], [4, 6], [4, 7], [5, 8], [6, 8], [7, 8]],
    "deadline": 8,
    "period": 8,
}


@pytest.fixture(scope="session")
def seven_node() -> DagTask:
    return load_and_normalize(SEVEN_NODE_RAW)


@pytest.fixture(scope="session")
def nine_node() -> DagTask:
    return load_and_normalize(NINE_NODE_RAW)


@pytest.fixture()
def seven_node_file(tmp_path, seven_node):
    path = tmp_path / "seven_node.json"
    seven_node.write(path)
    return path


@pytest.fixture()
def nine_node_file(tmp_path, nine_node):
    path = tmp_path / "nine_node.json"
    nine_node.write(path)
    return path
