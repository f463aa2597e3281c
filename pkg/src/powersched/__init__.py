"""Energy-minimal scheduling of deadline jobs on machines that can sleep."""

from .core import (
    DisjointIntervalSet,
    InfeasibleInstanceError,
    Instance,
    InternalInvariantError,
    Interval,
    IntervalMultiset,
    Job,
    SchedulingError,
    TriviallyInfeasibleError,
    deficiency,
    energy,
    forced_volume_interval,
    forced_volume_set,
    total_volume,
)
from .decompose import CandidateSolution, convex_decompose, overlap_count, uncross
from .extend import extend_multi, extend_multi_batched, extend_single, modify_multi
from .flow import (
    build_coarse,
    build_unit_network,
    check_feasible,
    min_cut_minimal_source,
)
from .lp import (
    build_lp_multi,
    build_lp_single,
    build_point_set,
    enumerate_intervals,
    solve_lp,
)
from .pipeline import PipelineConfig, PipelineResult, solve_instance
from .schedule import Schedule, assign_jobs, exact_opt, expand_coarse, verify

__all__ = [name for name in dir() if not name.startswith("_")]
