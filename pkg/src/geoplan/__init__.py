"""Obstacle-avoiding trajectory planning on SO(3) and the unit sphere.

The planner integrates the reduced necessary conditions of the variational
obstacle avoidance problem (modified Riemannian cubics driven by an
artificial potential in the bi-invariant distance) and solves the
two-point boundary value problem by damped shooting with potential
continuation.
"""

from ._jit import NUMBA_ACTIVE
from .algebra import exp_so3, hat, log_so3, orthonormalize, rotation_angle, vee
from .dynamics import (
    ReducedState,
    ReducedSystem,
    StateDerivative,
    make_system,
    rhs_bi_invariant,
    rhs_euler,
    rhs_geodesic,
    rhs_left_invariant,
)
from .errors import (
    AntipodalLiftAmbiguity,
    AntipodalSingularity,
    FiberDegenerate,
    GeoplanError,
    HomotopyStall,
    IoError,
    NoConvergence,
    NonFiniteState,
    NonSkewInput,
    NotHorizontal,
    ParseError,
    TooFarFromGroup,
    ValidationError,
)
from .integrators import TrajectorySample, integrate, rk4_step
from .metric import InertiaTensor, ad_dagger, beta, curvature, g_connection, inner_bi, inner_left
from .potential import MetricMode, ObstacleSpec, distance_to_obstacle, potential_value, reduced_gradient
from .runner import Report, run_scenario, simulate_scenario, write_trajectory
from .scenario import Scenario, build_problem, load_scenario, parse_scenario
from .shooting import (
    BoundaryConditions,
    PlannedTrajectory,
    ShootingProblem,
    fd_jacobian,
    residual,
    solve,
    verify_trajectory,
)
from .sphere import (
    SphereBoundary,
    SpherePoint,
    h_connection,
    lift_boundary,
    project_horizontal,
    project_sphere,
    project_vertical,
    q_tilde,
    rhs_sphere,
    theta_fiber,
)

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ACTIVE",
    "__version__",
    # algebra
    "hat",
    "vee",
    "exp_so3",
    "log_so3",
    "rotation_angle",
    "orthonormalize",
    # metric
    "InertiaTensor",
    "inner_left",
    "inner_bi",
    "ad_dagger",
    "g_connection",
    "curvature",
    "beta",
    # potential
    "MetricMode",
    "ObstacleSpec",
    "distance_to_obstacle",
    "potential_value",
    "reduced_gradient",
    # dynamics
    "ReducedState",
    "StateDerivative",
    "ReducedSystem",
    "make_system",
    "rhs_geodesic",
    "rhs_euler",
    "rhs_left_invariant",
    "rhs_bi_invariant",
    # sphere
    "SpherePoint",
    "SphereBoundary",
    "project_horizontal",
    "project_vertical",
    "h_connection",
    "q_tilde",
    "rhs_sphere",
    "theta_fiber",
    "lift_boundary",
    "project_sphere",
    # integration
    "TrajectorySample",
    "rk4_step",
    "integrate",
    # shooting
    "BoundaryConditions",
    "ShootingProblem",
    "PlannedTrajectory",
    "residual",
    "fd_jacobian",
    "solve",
    "verify_trajectory",
    # scenarios / io
    "Scenario",
    "parse_scenario",
    "load_scenario",
    "build_problem",
    "Report",
    "run_scenario",
    "simulate_scenario",
    "write_trajectory",
    # errors
    "GeoplanError",
    "NonSkewInput",
    "AntipodalSingularity",
    "TooFarFromGroup",
    "NotHorizontal",
    "FiberDegenerate",
    "AntipodalLiftAmbiguity",
    "NonFiniteState",
    "NoConvergence",
    "HomotopyStall",
    "ParseError",
    "ValidationError",
    "IoError",
]
