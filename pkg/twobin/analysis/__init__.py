"""
Numeric threshold analysis of the backward-search recurrence
"""

from .bounds import (
    DENSITY_CEILING,
    MOVE_SLOPE_RANGE,
    RECURRENCE_THRESHOLD,
    TAYLOR_THRESHOLD,
    UTILIZATION_CEILING,
    UTILIZATION_FLOOR,
    default_search_caps,
    depth_limited_load_bound,
    greedy_load_band,
    log2log2,
    move_depth_bound,
    move_growth_slope,
)
from .recurrence import (
    RecurrenceTrace,
    ScanResult,
    Termination,
    converges_nonzero,
    decays,
    iterate_recurrence,
    iterations_to_reach,
    nonzero_fixed_point,
    positivity_function,
    positivity_scan,
    recurrence_step,
    threshold_bisect,
    write_trace_csv,
)

__all__ = [
    "DENSITY_CEILING", "RECURRENCE_THRESHOLD", "TAYLOR_THRESHOLD", "UTILIZATION_CEILING",
    "UTILIZATION_FLOOR", "MOVE_SLOPE_RANGE",
    "default_search_caps", "depth_limited_load_bound", "greedy_load_band", "log2log2", "move_depth_bound",
    "move_growth_slope",
    "RecurrenceTrace", "ScanResult", "Termination", "converges_nonzero", "decays", "iterate_recurrence",
    "iterations_to_reach", "nonzero_fixed_point", "positivity_function", "positivity_scan",
    "recurrence_step", "threshold_bisect", "write_trace_csv",
]
