"""Exact multi-marginal optimal transport for time-discretized generalized Euler flows."""
from .costs import CostFunction, action_cost, make_cost, modified_cost, reduced_cost
from .errors import (
    EndpointMapUndefined,
    InconsistentPlan,
    InvalidArgument,
    MMOTError,
    ResourceLimit,
    SolverError,
)
from .euler import (
    ContinuousPlanSpec,
    cost_bounds,
    delta_family_plan,
    el_residual,
    gerosplan_plan,
    solve_discrete_el,
    theorem1_discretized_plan,
    velocity_from_path,
)
from .grid import (
    EndpointMap,
    SpatialGrid,
    TimeGrid,
    enumerate_paths,
    flip_map,
    three_point_grid,
    uniform_symmetric_grid,
)
from .lp import (
    LinearProgram,
    LpSolution,
    assemble_mmot_lp,
    monge_bruteforce,
    optimal_face_probe,
    solve_simplex,
)
from .measures import (
    TransportPlan,
    extend_plan,
    is_mass_splitting,
    is_monge,
    marginal,
    plan_cost,
    reduce_plan,
)
from .qsqrt3 import QSqrt3

__version__ = "0.1.0"
