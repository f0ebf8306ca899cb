import csv
import json
import subprocess
import sys
from pathlib import Path

from click.testing import CliRunner

from egsched.bench import bench_dataset, read_records
from egsched.cli import main
from egsched.report import write_report
from egsched.taskgen import StructureSpec, generate_dataset

HELPERS = Path(__file__).parent / "helpers"


def invoke(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_analyze(seven_node_file):
    result = invoke("analyze", seven_node_file)
    assert result.exit_code == 0
    assert "length 8  width 3" in result.output


def test_analyze_json(seven_node_file):
    result = invoke("analyze", seven_node_file, "--json")
    payload = json.loads(result.output)
    assert payload["length"] == 8
    assert payload["width"] == 3
    assert payload["lw"] == [0, 2, 2, 2, 2, 1, 0]


def test_analyze_mask_dump(seven_node_file):
    result = invoke("analyze", seven_node_file, "--dump-masks")
    assert result.exit_code == 0
    assert "[combined]" in result.output


def test_egs_greedy(seven_node_file):
    result = invoke("egs", seven_node_file, "--policy", "greedy")
    assert result.exit_code == 0
    assert "processors 2" in result.output


def test_egs_writes_supergraph(seven_node_file, tmp_path):
    out = tmp_path / "super.json"
    result = invoke("egs", seven_node_file, "--policy", "greedy", "--out", out)
    assert result.exit_code == 0
    payload = json.loads(out.read_text())
    assert [2, 3] in payload["edges"]


def test_egs_infeasible_exit_code(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(
        {"wcet": [5, 5], "edges": [[0, 1]], "deadline": 8, "period": 8}))
    result = invoke("egs", path)
    assert result.exit_code == 3


def test_egs_external_policy_failure_exit_code(seven_node_file):
    result = invoke("egs", seven_node_file, "--policy", "external", "--policy-cmd",
                    f"{sys.executable} -c pass")
    assert result.exit_code == 4


def test_egs_external_echo(seven_node_file):
    cmd = f"{sys.executable} {HELPERS / 'echo_policy.py'} 0"
    result = invoke("egs", seven_node_file, "--policy", "external", "--policy-cmd", cmd)
    assert result.exit_code == 0
    assert "processors 2" in result.output


def test_baseline(seven_node_file):
    result = invoke("baseline", seven_node_file, "--rule", "vertex-length")
    assert result.exit_code == 0
    assert "processors 2" in result.output


def test_exact(seven_node_file):
    result = invoke("exact", seven_node_file)
    assert result.exit_code == 0
    assert "processors 2 status optimal" in result.output


def test_exact_lp_export(seven_node_file, tmp_path):
    out = tmp_path / "model.lp"
    result = invoke("exact", seven_node_file, "--export-lp", out)
    assert result.exit_code == 0
    text = out.read_text()
    assert text.startswith("Minimize")
    assert "precedence_8" in text


def test_simulate_global(seven_node_file, tmp_path):
    prefix = tmp_path / "sched"
    result = invoke("simulate", seven_node_file, "-M", "3", "--mode", "global",
                    "--out", prefix)
    assert result.exit_code == 0
    assert "feasible True" in result.output
    assert (tmp_path / "sched.json").exists()
    assert (tmp_path / "sched.csv").exists()
    assert (tmp_path / "sched.png").exists()


def test_simulate_partitioned(seven_node_file):
    result = invoke("simulate", seven_node_file, "-M", "3", "--mode", "partitioned")
    assert result.exit_code == 0


def test_simulate_partitioned_too_few(seven_node_file):
    result = invoke("simulate", seven_node_file, "-M", "2", "--mode", "partitioned")
    assert result.exit_code == 3


def test_simulate_global_infeasible(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps(
        {"wcet": [4, 4, 4], "edges": [], "deadline": 5, "period": 5}))
    result = invoke("simulate", path, "-M", "1", "--mode", "global")
    assert result.exit_code == 3
    assert "feasible False" in result.output


def test_usage_error_exit_code(seven_node_file):
    result = invoke("egs", seven_node_file, "--policy", "external")
    assert result.exit_code == 2


def test_gen_bench_report_pipeline(tmp_path):
    dataset = tmp_path / "ds"
    result = invoke("gen", "--out", dataset, "--per-cell", "5", "--seed", "3",
                    "--u", "1", "--dens", "0.8",
                    "--structure", "1,0.9,3")
    assert result.exit_code == 0, result.output
    results_csv = tmp_path / "results.csv"
    result = invoke("bench", "--dataset", dataset, "--out", results_csv,
                    "--algs", "egs-grd,egs-rnd,baseline-vl,exact", "--seed", "1")
    assert result.exit_code == 0, result.output
    rows = read_records(results_csv)
    assert len(rows) == 1 * 4  # one test task (split of 5), four algorithms
    report_dir = tmp_path / "report"
    result = invoke("report", results_csv, "--out", report_dir, "--M", "8")
    assert result.exit_code == 0, result.output
    for name in ("usage_by_cell.csv", "usage_by_utilization.csv",
                 "acceptance_ratio.csv", "optimality_gap.csv",
                 "usage_by_utilization.png", "acceptance_ratio.png"):
        assert (report_dir / name).exists(), name


def test_bench_parallel_matches_serial(tmp_path):
    dataset = tmp_path / "ds"
    generate_dataset(dataset, per_cell=5, seed=4, u_ranges=[(1, 2)],
                     dens_ranges=[(0.7, 0.8)],
                     structure=StructureSpec(2, 0.6, 3))
    serial = tmp_path / "serial.csv"
    parallel = tmp_path / "parallel.csv"
    bench_dataset(dataset, ["egs-grd", "egs-rnd"], serial, seed=0, jobs=1,
                  split="train")
    bench_dataset(dataset, ["egs-grd", "egs-rnd"], parallel, seed=0, jobs=3,
                  split="train")
    strip = lambda rows: [
        {k: v for k, v in row.items() if k != "runtime_ms"} for row in rows]
    assert strip(read_records(serial)) == strip(read_records(parallel))


def test_report_pivot_density(tmp_path):
    dataset = tmp_path / "ds"
    generate_dataset(dataset, per_cell=5, seed=4, u_ranges=[(1, 2)],
                     dens_ranges=[(0.7, 0.8)],
                     structure=StructureSpec(2, 0.6, 3))
    results_csv = tmp_path / "r.csv"
    bench_dataset(dataset, ["egs-grd"], results_csv, split="train")
    write_report(read_records(results_csv), tmp_path / "rep", pivot="density",
                 budget=4, figures=False)
    with open(tmp_path / "rep" / "usage_by_density.csv", newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["density", "egs-grd_mean"]
    assert rows[1][0] == "0.7"


def test_cli_entrypoint_subprocess(seven_node_file):
    proc = subprocess.run(
        [sys.executable, "-m", "egsched.cli", "analyze", str(seven_node_file)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "width 3" in proc.stdout
