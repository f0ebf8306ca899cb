"""Processor-minimizing scheduling of non-preemptive real-time DAG tasks.

A task whose longest path fits its deadline and whose width fits the
processor count is schedulable outright; this package decides and
minimizes processor usage by adding provably safe precedence edges
until that holds, extracts concrete schedules, and benchmarks against
exact and list-scheduling baselines.
"""

from .analysis import (
    GraphAnalysis,
    analyze,
    dag_length,
    dag_width,
    parallelism_attributes,
    timing_attributes,
    transitive_closure,
)
from .baselines import (
    PriorityAssignment,
    PriorityRule,
    incremental_search,
    list_schedule,
    vertex_length_priority,
)
from .bitmatrix import BoolMatrix
from .dispatch import (
    QueueStats,
    Schedule,
    global_simulate,
    partitioned_dispatch,
    schedule_to_supergraph,
    validate_schedule,
)
from .engine import (
    EgsResult,
    EgsState,
    PolicyDecision,
    TerminationReason,
    egs_run,
    greedy_policy,
    lower_bound,
    lower_bound_subset,
    mdp_reward,
    random_policy,
    scripted_policy,
)
from .errors import (
    CyclicGraphError,
    EgschedError,
    EmptyGraphError,
    EmptySubsetError,
    GenerationExhaustedError,
    InfeasibleDeadlineError,
    InfeasibleScheduleError,
    InvalidDeadlineError,
    NotOptimalError,
    NotTriviallySchedulableError,
    PolicyProtocolError,
    PolicyTimeoutError,
    TaskFormatError,
)
from .exact import ExactResult, ExactStatus, branch_and_bound, export_milp_lp, verify_optimality_gap
from .masks import (
    EdgeMask,
    combined_mask,
    cycle_mask,
    length_mask,
    redundancy_mask,
    width_mask,
)
from .protocol import ExternalPolicy, SubprocessTransport, TcpTransport
from .task import DagTask, load_and_normalize, load_task
from .taskgen import GenSpec, StructureSpec, generate_dataset, generate_task

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
