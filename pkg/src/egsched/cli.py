"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 infeasible input (length beyond
deadline, impossible simulation target), 4 external-policy protocol
failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .analysis import analyze
from .baselines import incremental_search, vertex_length_priority
from .bench import ALGORITHMS, bench_dataset, read_records
from .dispatch import (
    global_simulate,
    partitioned_dispatch,
    schedule_to_gantt_csv,
    schedule_to_json,
)
from .engine import egs_run, greedy_policy, random_policy
from .errors import (
    EgschedError,
    InfeasibleDeadlineError,
    NotTriviallySchedulableError,
    PolicyProtocolError,
)
from .exact import ExactStatus, branch_and_bound, export_milp_lp
from .masks import combined_mask, mask_to_ascii
from .protocol import ExternalPolicy, SubprocessTransport, TcpTransport
from .task import load_task
from .taskgen import StructureSpec, generate_dataset

EXIT_INFEASIBLE = 3
EXIT_PROTOCOL = 4


@click.group()
def main() -> None:
    """Minimize processor usage of non-preemptive DAG tasks by edge generation."""


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@main.command("analyze")
@click.argument("task_file", type=click.Path(exists=True))
@click.option("--dump-masks", is_flag=True, help="Print the four masks as 0/1 grids.")
@click.option("--json", "as_json", is_flag=True, help="Emit attributes as JSON.")
def analyze_cmd(task_file: str, dump_masks: bool, as_json: bool) -> None:
    """Print length, width, and per-node attributes of a task."""
    task = load_task(task_file)
    result = analyze(task)
    if as_json:
        click.echo(json.dumps({
            "n": task.n,
            "deadline": task.deadline,
            "length": result.length,
            "width": result.width,
            "est": list(result.est),
            "eft": list(result.eft),
            "lst": list(result.lst),
            "lft": list(result.lft),
            "lw": list(result.lw),
            "iw": list(result.iw),
            "ow": list(result.ow),
            "critical_path": list(result.critical_path),
            "path_cover": [list(c) for c in result.path_cover],
        }, sort_keys=True))
    else:
        click.echo(f"n {task.n}  deadline {task.deadline}  period {task.period}")
        click.echo(f"length {result.length}  width {result.width}")
        click.echo(f"critical path {list(result.critical_path)}")
        for name in ("est", "eft", "lst", "lft", "lw", "iw", "ow"):
            click.echo(f"{name} {list(getattr(result, name))}")
        click.echo(f"path cover {[list(c) for c in result.path_cover]}")
    if dump_masks:
        click.echo(mask_to_ascii(combined_mask(task, result)))


@main.command("egs")
@click.argument("task_path", type=click.Path(exists=True))
@click.option("--policy", type=click.Choice(["greedy", "random", "external"]),
              default="greedy", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--policy-cmd", default=None,
              help="Spawn this command as the external policy (stdio).")
@click.option("--policy-addr", default=None,
              help="Connect to an external policy at host:port.")
@click.option("--out", "out_file", type=click.Path(), default=None,
              help="Write the resulting supergraph task JSON here.")
def egs_cmd(task_path: str, policy: str, seed: int, policy_cmd: str | None,
            policy_addr: str | None, out_file: str | None) -> None:
    """Run the edge-generation loop on a task file (or every task in a directory)."""
    paths = sorted(Path(task_path).rglob("task_*.json")) \
        if Path(task_path).is_dir() else [Path(task_path)]
    if not paths:
        _fail(2, f"no task files under {task_path}")
    for path in paths:
        task = load_task(path)
        transport = None
        try:
            if policy == "greedy":
                chosen = greedy_policy
            elif policy == "random":
                chosen = random_policy
            else:
                if policy_cmd:
                    transport = SubprocessTransport(policy_cmd)
                elif policy_addr:
                    transport = TcpTransport(policy_addr)
                else:
                    raise click.UsageError(
                        "--policy external needs --policy-cmd or --policy-addr")
                chosen = ExternalPolicy(transport)
            result = egs_run(task, chosen, seed)
        except InfeasibleDeadlineError as exc:
            _fail(EXIT_INFEASIBLE, f"{path}: {exc}")
        except PolicyProtocolError as exc:
            _fail(EXIT_PROTOCOL, f"{path}: {exc}")
        finally:
            if transport is not None:
                transport.close()
        click.echo(
            f"{path} processors {result.processors}"
            f" width {result.width_history[0]}->{result.processors}"
            f" reward {result.reward_total}"
            f" edges {list(result.added_edges)}"
            f" stop {result.terminated_by.value}"
        )
        if out_file and len(paths) == 1:
            result.final_graph.write(out_file)


@main.command("baseline")
@click.argument("task_file", type=click.Path(exists=True))
@click.option("--rule", type=click.Choice(["vertex-length"]), default="vertex-length",
              show_default=True)
def baseline_cmd(task_file: str, rule: str) -> None:
    """Minimum processors under the incremental list-scheduling baseline."""
    task = load_task(task_file)
    try:
        priorities = vertex_length_priority(analyze(task))
        count = incremental_search(task, priorities)
    except InfeasibleDeadlineError as exc:
        _fail(EXIT_INFEASIBLE, str(exc))
    click.echo(f"processors {count} rule {rule}")


@main.command("exact")
@click.argument("task_file", type=click.Path(exists=True))
@click.option("--export-lp", "lp_file", type=click.Path(), default=None,
              help="Write the MILP in LP format and exit.")
@click.option("--time-limit", type=float, default=None, help="Seconds.")
def exact_cmd(task_file: str, lp_file: str | None, time_limit: float | None) -> None:
    """Exact minimum processor count by branch and bound."""
    task = load_task(task_file)
    if lp_file:
        Path(lp_file).write_text(export_milp_lp(task))
        click.echo(f"wrote {lp_file}")
        return
    try:
        result = branch_and_bound(task, time_limit)
    except InfeasibleDeadlineError as exc:
        _fail(EXIT_INFEASIBLE, str(exc))
    click.echo(
        f"processors {result.min_processors} status {result.status.value}"
        f" explored {result.explored_nodes}")
    if result.status is ExactStatus.TIMED_OUT:
        sys.exit(0)


@main.command("simulate")
@click.argument("task_file", type=click.Path(exists=True))
@click.option("-M", "--processors", "m", type=int, required=True)
@click.option("--mode", type=click.Choice(["global", "partitioned"]), default="global",
              show_default=True)
@click.option("--out", "out_prefix", type=click.Path(), default=None,
              help="Write <out>.json, <out>.csv, and <out>.png for the schedule.")
def simulate_cmd(task_file: str, m: int, mode: str, out_prefix: str | None) -> None:
    """Dispatch a task on M processors and report the schedule."""
    task = load_task(task_file)
    stats = None
    if mode == "partitioned":
        try:
            analysis = analyze(task)
            if analysis.width > m:
                raise NotTriviallySchedulableError(
                    f"width {analysis.width} > M={m}")
            schedule = partitioned_dispatch(task, analysis)
        except (NotTriviallySchedulableError, InfeasibleDeadlineError) as exc:
            _fail(EXIT_INFEASIBLE, str(exc))
    else:
        schedule, stats = global_simulate(task, m)
    feasible = schedule.feasible(task.deadline)
    line = f"makespan {schedule.makespan} deadline {task.deadline} feasible {feasible}"
    if stats is not None:
        line += f" max_active {stats.max_active} queue_delay {stats.total_queue_delay}"
    click.echo(line)
    if out_prefix:
        Path(out_prefix + ".json").write_text(schedule_to_json(schedule))
        Path(out_prefix + ".csv").write_text(schedule_to_gantt_csv(schedule))
        from . import plots

        plots.gantt_figure(schedule, task.deadline, Path(out_prefix + ".png"))
    if not feasible:
        sys.exit(EXIT_INFEASIBLE)


@main.command("gen")
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--per-cell", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--u", "u_los", type=float, multiple=True,
              help="Utilization range lower bounds (width 1); default 1..7.")
@click.option("--dens", "d_los", type=float, multiple=True,
              help="Density range lower bounds (width 0.1); default 0.5..0.9.")
@click.option("--structure", default=None,
              help="max_depth,parallel_prob,max_branches (e.g. 3,0.75,4).")
def gen_cmd(out_dir: str, per_cell: int, seed: int, u_los: tuple[float, ...],
            d_los: tuple[float, ...], structure: str | None) -> None:
    """Generate a dataset of random tasks over a utilization/density grid."""
    from fractions import Fraction

    u_ranges = [(Fraction(str(u)), Fraction(str(u)) + 1) for u in u_los] or None
    dens_ranges = [
        (Fraction(str(d)), Fraction(str(d)) + Fraction(1, 10)) for d in d_los
    ] or None
    spec = StructureSpec()
    if structure:
        depth, prob, branches = structure.split(",")
        spec = StructureSpec(int(depth), float(prob), int(branches))
    manifest = generate_dataset(out_dir, per_cell, seed,
                                u_ranges=u_ranges, dens_ranges=dens_ranges,
                                structure=spec)
    click.echo(f"wrote {len(manifest['cells'])} cells x {per_cell} tasks to {out_dir}")


@main.command("bench")
@click.option("--dataset", type=click.Path(exists=True), required=True)
@click.option("--algs", default="egs-grd,egs-rnd,baseline-vl",
              show_default=True, help=f"Comma list from {', '.join(ALGORITHMS)}.")
@click.option("--out", "out_csv", type=click.Path(), required=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--split", default="test", show_default=True)
@click.option("--time-limit", type=float, default=None,
              help="Per-task budget for the exact solver (seconds).")
def bench_cmd(dataset: str, algs: str, out_csv: str, jobs: int, seed: int,
              split: str, time_limit: float | None) -> None:
    """Run algorithms over a dataset split and persist one CSV row per run."""
    names = [a.strip() for a in algs.split(",") if a.strip()]
    count = bench_dataset(dataset, names, out_csv, seed=seed, jobs=jobs,
                          split=split, time_limit=time_limit)
    click.echo(f"wrote {count} records to {out_csv}")


@main.command("report")
@click.argument("results_csv", type=click.Path(exists=True))
@click.option("--pivot", type=click.Choice(["utilization", "density"]),
              default="utilization", show_default=True)
@click.option("--M", "budget", type=int, default=8, show_default=True,
              help="Processor budget for the acceptance-ratio table.")
@click.option("--out", "out_dir", type=click.Path(), default="report",
              show_default=True)
@click.option("--figures/--no-figures", default=True, show_default=True)
def report_cmd(results_csv: str, pivot: str, budget: int, out_dir: str,
               figures: bool) -> None:
    """Pivot a results CSV into usage, acceptance-ratio, and gap tables."""
    from .report import write_report  # defers matplotlib import

    records = read_records(results_csv)
    write_report(records, out_dir, pivot=pivot, budget=budget, figures=figures)
    click.echo(f"report written to {out_dir}")


def _entry() -> None:  # pragma: no cover
    try:
        main(standalone_mode=True)
    except EgschedError as exc:
        _fail(1, str(exc))


if __name__ == "__main__":  # pragma: no cover
    _entry()
