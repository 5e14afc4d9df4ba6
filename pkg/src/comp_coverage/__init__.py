"""Uplink coverage analysis for CoMP cellular networks on a hexagonal grid.

Closed-form capacity coverage probability and ergodic capacity under
inter-cooperation-region interference, a Monte Carlo oracle validating
them, and a solver for the base-station density meeting a coverage target.
"""

from .core import (
    ConfigError,
    NetworkConfig,
    PowerW,
    dbm_to_watts,
    q_function,
    q_integral,
    shadow_scale,
    watts_to_dbm,
)
from .coverage import (
    CoverageQuery,
    LognormalSinr,
    MomentUnderflowError,
    SinrDecomposition,
    average_ccp,
    ccp_at_points,
    ccp_point,
    cr_grid_points,
    decompose,
    ergodic_at_points,
    ergodic_point,
    interference_limited,
    moment_match,
    sum_ccp,
    worst_case_ccp,
    worst_case_ergodic,
)
from .design import (
    ComparisonRow,
    DesignSolution,
    SweepRow,
    compare_orders,
    solve_density,
    sweep_metric,
)
from .geometry import (
    ConvexPolygon,
    CoopRegion,
    GeometryError,
    InterferenceLayout,
    Point2D,
    build_tessellation,
    color_reuse6,
    distances,
    home_cr,
    interference_layout,
    worst_case_points,
)
from .icri import IcriCoefficients, IcriResult, beta_region, beta_total, icri_avg
from .montecarlo import (
    ChannelSample,
    McEstimate,
    TrialSeed,
    baseline_no_comp,
    capacity_samples,
    estimate_ccp,
    estimate_ergodic,
    estimate_icri,
    sample_trial,
    sinr_instant,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
