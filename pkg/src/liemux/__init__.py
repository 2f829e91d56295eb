"""Lie-bracket time-division multiplexed control of driftless systems.

The package turns the two inputs of a nonholonomic vehicle into three
independent motion directions by cycling the inputs through a fast four-leg
square wave whose average motion includes the Lie-bracket direction.  It
ships the vector-field algebra, the multiplexing controller, a fixed-step
simulator, first- and second-order Dubins car control stacks, and a scenario
runner reproducing the standard experiments.
"""

from .dubins import (
    DubinsState1,
    DubinsState2,
    GainSet,
    Pose,
    body_matrix,
    cardinal_controller,
    desired_pose_rate,
    dubins1_dynamics,
    dubins1_fields,
    dubins2_dynamics,
    lissajous_reference,
    pose_controller_1,
    pose_controller_2,
    velocity_loop,
)
from .multiplexer import (
    ZERO_COMMAND,
    BracketCommand,
    CycleParams,
    MuxState,
    cycle_params,
    mux_advance,
    mux_init,
    mux_output,
    mux_refresh,
)
from .scenarios import (
    ConfigError,
    ConvergenceReport,
    ReferenceSpec,
    Scenario,
    builtin_scenarios,
    cycle_displacement,
    execute_scenario,
    export_csv,
    export_svg,
    load_csv,
    load_scenario_file,
    run_scenario,
    scenario_from_dict,
    verify_convergence,
)
from .simulator import (
    DivergenceError,
    SimConfig,
    Trajectory,
    euler_step,
    mean_velocity,
    rk4_step,
    simulate,
    tracking_error,
)
from .util import wrap_angle
from .vectorfield import (
    DEFAULT_STEP,
    NESTED_STEP,
    EvaluationError,
    JacobianEstimate,
    VectorField,
    bracket_field,
    constant_field,
    jacobi_residual,
    jacobian_at,
    lie_bracket,
    lie_span_rank,
    linear_field,
    scaled,
)

__version__ = "0.1.0"

__all__ = [
    "BracketCommand",
    "ConfigError",
    "ConvergenceReport",
    "CycleParams",
    "DEFAULT_STEP",
    "DivergenceError",
    "DubinsState1",
    "DubinsState2",
    "EvaluationError",
    "GainSet",
    "JacobianEstimate",
    "MuxState",
    "NESTED_STEP",
    "Pose",
    "ReferenceSpec",
    "Scenario",
    "SimConfig",
    "Trajectory",
    "VectorField",
    "ZERO_COMMAND",
    "body_matrix",
    "bracket_field",
    "builtin_scenarios",
    "cardinal_controller",
    "constant_field",
    "cycle_displacement",
    "cycle_params",
    "desired_pose_rate",
    "dubins1_dynamics",
    "dubins1_fields",
    "dubins2_dynamics",
    "euler_step",
    "execute_scenario",
    "export_csv",
    "export_svg",
    "jacobi_residual",
    "jacobian_at",
    "lie_bracket",
    "lie_span_rank",
    "linear_field",
    "lissajous_reference",
    "load_csv",
    "load_scenario_file",
    "mean_velocity",
    "mux_advance",
    "mux_init",
    "mux_output",
    "mux_refresh",
    "pose_controller_1",
    "pose_controller_2",
    "rk4_step",
    "run_scenario",
    "scaled",
    "scenario_from_dict",
    "simulate",
    "tracking_error",
    "velocity_loop",
    "verify_convergence",
    "wrap_angle",
]
