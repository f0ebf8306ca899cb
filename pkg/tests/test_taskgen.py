import json
import random
from fractions import Fraction

import pytest

from egsched.errors import GenerationExhaustedError
from egsched.task import load_task
from egsched.taskgen import (
    GenSpec,
    StructureSpec,
    cell_label,
    generate_dataset,
    generate_task,
    sample_structure,
    split_counts,
    task_density,
    task_utilization,
)


def test_genspec_validation():
    with pytest.raises(ValueError):
        GenSpec((0, 1), (Fraction(5, 10), Fraction(6, 10)))
    with pytest.raises(ValueError):
        GenSpec((1, 2), (Fraction(0), Fraction(1, 10)))
    with pytest.raises(ValueError):
        GenSpec((1, 2), (Fraction(5, 10), Fraction(6, 10)), count=0)


def test_ranges_stored_exactly():
    spec = GenSpec((1, 2), (0.7, 0.8))
    assert spec.dens_range == (Fraction(7, 10), Fraction(4, 5))


def test_generated_tasks_hit_the_cell():
    spec = GenSpec((2, 3), (Fraction(7, 10), Fraction(8, 10)), count=5, seed=3)
    rng = random.Random(3)
    for _ in range(5):
        task = generate_task(spec, rng)
        assert Fraction(2) <= task_utilization(task) < Fraction(3)
        assert Fraction(7, 10) <= task_density(task) < Fraction(8, 10)
        assert task.deadline == task.period == 10_000


def test_generation_deterministic():
    spec = GenSpec((1, 2), (Fraction(9, 10), Fraction(1)), seed=11)
    one = generate_task(spec, random.Random(11)).to_json()
    two = generate_task(spec, random.Random(11)).to_json()
    assert one == two


def test_generated_tasks_round_trip(tmp_path):
    spec = GenSpec((1, 2), (Fraction(5, 10), Fraction(6, 10)), seed=0)
    task = generate_task(spec, random.Random(0))
    path = tmp_path / "generated.json"
    task.write(path)
    assert load_task(path) == task


def test_impossible_cell_exhausts():
    # Density below 0.5 of a single-target cell with utilization pinned at
    # its ray: a one-node structure (max_depth 0) has dens == U, so the
    # disjoint ranges can never both hold.
    spec = GenSpec((1, 2), (Fraction(5, 10), Fraction(6, 10)),
                   structure=StructureSpec(max_depth=0))
    with pytest.raises(GenerationExhaustedError):
        generate_task(spec, random.Random(0))


def test_node_count_distribution():
    """Default structures concentrate between 10 and 80 nodes, capped at 140."""
    rng = random.Random(7)
    counts = [sample_structure(rng, StructureSpec())[0] for _ in range(3000)]
    kept = [n for n in counts if n <= 140]
    in_band = sum(1 for n in kept if 10 <= n <= 80) / len(kept)
    assert in_band >= 0.5
    ordered = sorted(kept)
    median = ordered[len(ordered) // 2]
    assert 10 * 0.8 <= median <= 80 * 1.2
    assert sum(1 for n in counts if n > 140) / len(counts) < 0.05


def test_split_counts():
    assert split_counts(10) == (6, 2, 2)
    assert split_counts(5) == (3, 1, 1)
    train, val, test = split_counts(3000)
    assert (train, val, test) == (1800, 600, 600)


def test_cell_label():
    assert cell_label((Fraction(1), Fraction(2)),
                      (Fraction(9, 10), Fraction(1))) == "u1-2_d0.9-1"


def test_generate_dataset_layout(tmp_path):
    out = tmp_path / "ds"
    manifest = generate_dataset(
        out, per_cell=5, seed=9,
        u_ranges=[(1, 2)],
        dens_ranges=[(Fraction(5, 10), Fraction(6, 10)),
                     (Fraction(6, 10), Fraction(7, 10))],
        structure=StructureSpec(max_depth=2, parallel_prob=0.6, max_branches=3),
    )
    assert len(manifest["cells"]) == 2
    label = manifest["cells"][0]["label"]
    assert len(list((out / "train" / label).glob("task_*.json"))) == 3
    assert len(list((out / "val" / label).glob("task_*.json"))) == 1
    assert len(list((out / "test" / label).glob("task_*.json"))) == 1
    on_disk = json.loads((out / "manifest.json").read_text())
    assert on_disk["structure"]["max_depth"] == 2
    assert on_disk["seed"] == 9
    for path in out.rglob("task_*.json"):
        load_task(path)  # every file passes loader validation


def test_dataset_deterministic(tmp_path):
    kwargs = dict(per_cell=4, seed=21, u_ranges=[(1, 2)],
                  dens_ranges=[(Fraction(8, 10), Fraction(9, 10))],
                  structure=StructureSpec(max_depth=2, parallel_prob=0.6,
                                          max_branches=3))
    generate_dataset(tmp_path / "a", **kwargs)
    generate_dataset(tmp_path / "b", **kwargs)
    files_a = sorted((tmp_path / "a").rglob("*.json"))
    files_b = sorted((tmp_path / "b").rglob("*.json"))
    assert [f.relative_to(tmp_path / "a") for f in files_a] == \
           [f.relative_to(tmp_path / "b") for f in files_b]
    for fa, fb in zip(files_a, files_b):
        assert fa.read_bytes() == fb.read_bytes()
