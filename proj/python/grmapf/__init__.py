"""Grid rearrangement based multi-agent path planning."""

from ._core import (
    CapacityError,
    Error,
    Grid,
    InfeasibleError,
    Instance,
    LimitExceeded,
    PreconditionError,
    ScheduleError,
    generate,
    manhattan_lower_bound,
    metrics,
    optimal_makespan,
    refine,
    solve,
    validate,
)

__all__ = [
    "CapacityError",
    "Error",
    "Grid",
    "InfeasibleError",
    "Instance",
    "LimitExceeded",
    "PreconditionError",
    "ScheduleError",
    "generate",
    "manhattan_lower_bound",
    "metrics",
    "optimal_makespan",
    "refine",
    "solve",
    "validate",
]
