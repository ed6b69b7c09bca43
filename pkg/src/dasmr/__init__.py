"""Kinematic simulation, goal-conditioned episodes, maneuver-aware rewards
and evaluation metrics for double-Ackermann-steering mobile robots."""

from .environment import (
    Action,
    DasmrEnv,
    EnvConfig,
    Observation,
    StepResult,
    make_env,
)
from .kinematics import (
    RobotParams,
    VirtualBicycleCommand,
    WheelState,
    assign_left_right,
    chassis_rates,
    icr_offset,
    inner_outer_spin,
    inner_outer_steering,
    wheel_state,
)
from .metrics import (
    EpisodeRecord,
    MetricsReport,
    avg_error,
    build_report,
    sliding_monitor,
    spl,
    success_rate,
)
from .planner import (
    CemConfig,
    ForwardPolicy,
    OpenLoopPolicy,
    PlanResult,
    RandomPolicy,
    ZeroPolicy,
    cem_plan,
    episode_displacements,
    reward_ordering_probe,
    scripted_three_point,
)
from .rewards import (
    Displacement,
    RewardSpec,
    reward_ch,
    reward_cl,
    reward_es,
    reward_euclid,
    reward_field,
    reward_hs,
    reward_sparse,
)
from .simulator import (
    Pose,
    SimState,
    apply_actuators,
    initial_state,
    simulate_step,
    step_pose,
    wrap_angle,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "CemConfig",
    "DasmrEnv",
    "Displacement",
    "EnvConfig",
    "EpisodeRecord",
    "ForwardPolicy",
    "MetricsReport",
    "Observation",
    "OpenLoopPolicy",
    "PlanResult",
    "Pose",
    "RandomPolicy",
    "RewardSpec",
    "RobotParams",
    "SimState",
    "StepResult",
    "VirtualBicycleCommand",
    "WheelState",
    "ZeroPolicy",
    "apply_actuators",
    "assign_left_right",
    "avg_error",
    "build_report",
    "cem_plan",
    "chassis_rates",
    "episode_displacements",
    "icr_offset",
    "initial_state",
    "inner_outer_spin",
    "inner_outer_steering",
    "make_env",
    "reward_ch",
    "reward_cl",
    "reward_es",
    "reward_euclid",
    "reward_field",
    "reward_hs",
    "reward_ordering_probe",
    "reward_sparse",
    "scripted_three_point",
    "simulate_step",
    "sliding_monitor",
    "spl",
    "step_pose",
    "success_rate",
    "wheel_state",
    "wrap_angle",
]
