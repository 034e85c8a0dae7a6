"""Capacitated minimum power cover: solvers, oracle, baseline, harness."""

from .bench import ExperimentConfig, ResultRow, run_experiment, write_csv
from .generate import GenConfig, adjust_capacities, gen_instance
from .metrics import (
    MetricsRecord,
    ValidationReport,
    approximation_ratio,
    collect_metrics,
    util_variance,
    validate,
)
from .model import (
    Disk,
    Instance,
    OrderKey,
    Point,
    PowerParams,
    Server,
    User,
    build_disks,
    contains,
    dump_instance,
    instance_from_json_dict,
    instance_to_json_dict,
    load_instance,
    order_key,
    power,
    server_order,
    user_in_disk,
)
from .primal_dual import (
    AscentStalledError,
    DualState,
    EventTrace,
    InsufficientCapacityError,
    CapacityInvariantError,
    ManualDuals,
    SelectionEvent,
    SolverState,
    apply_selection,
    check_charging,
    dual_objective,
    init_solver,
    next_event,
    pd_solve,
    trace_to_json_list,
    verify_dual_feasibility,
)
from .reference import OptResult, feasible_assignment, ncs_solve, opt_solve
from .solution import Solution, make_solution

__all__ = [
    "AscentStalledError",
    "Disk",
    "DualState",
    "EventTrace",
    "ExperimentConfig",
    "GenConfig",
    "Instance",
    "InsufficientCapacityError",
    "CapacityInvariantError",
    "ManualDuals",
    "MetricsRecord",
    "OptResult",
    "OrderKey",
    "Point",
    "PowerParams",
    "ResultRow",
    "SelectionEvent",
    "Server",
    "Solution",
    "SolverState",
    "User",
    "ValidationReport",
    "adjust_capacities",
    "apply_selection",
    "approximation_ratio",
    "build_disks",
    "check_charging",
    "collect_metrics",
    "contains",
    "dual_objective",
    "dump_instance",
    "feasible_assignment",
    "gen_instance",
    "init_solver",
    "instance_from_json_dict",
    "instance_to_json_dict",
    "load_instance",
    "make_solution",
    "ncs_solve",
    "next_event",
    "opt_solve",
    "order_key",
    "pd_solve",
    "power",
    "run_experiment",
    "server_order",
    "trace_to_json_list",
    "user_in_disk",
    "util_variance",
    "validate",
    "verify_dual_feasibility",
    "write_csv",
]
