"""Goal-conditioned episodic environment for the double-Ackermann platform.

Each episode places the robot at the center of a square workspace and samples
a goal position from a smaller square; the agent commands normalized wheel
spin and steering in [-1, 1]^2 at 40 Hz and succeeds by bringing the center
within the distance threshold of the goal, orientation-free. Observations,
goals and workspace bounds are expressed in the robot's frame at reset.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .kinematics import RobotParams, VirtualBicycleCommand, inner_outer_steering
from .rewards import RewardSpec, evaluate
from .simulator import (
    DEFAULT_DT,
    Pose,
    SimState,
    initial_state,
    rebased,
    simulate_step,
    wrap_angle,
)

TRUNCATION_TIME = "time"
TRUNCATION_BOUNDS = "bounds"


@dataclass(frozen=True)
class EnvConfig:
    """Episode layout, termination rules and reward selection."""

    workspace_half_extent: float = 4.0
    goal_half_extent: float = 2.0
    d_th: float = 0.15
    max_episode_steps: int = 800
    dt: float = DEFAULT_DT
    reward: RewardSpec = field(default_factory=RewardSpec)
    seed: int = 9527
    reset_robot_pose: Pose = field(default_factory=Pose)
    continuous_goals: bool = False

    def __post_init__(self):
        if not self.goal_half_extent <= self.workspace_half_extent:
            raise ValueError(
                "goal_half_extent must not exceed workspace_half_extent"
            )
        if not self.d_th > 0.0:
            raise ValueError(f"d_th must be > 0, got {self.d_th!r}")
        if not self.max_episode_steps > 0:
            raise ValueError(
                f"max_episode_steps must be > 0, got {self.max_episode_steps!r}"
            )
        if not self.dt > 0.0:
            raise ValueError(f"dt must be > 0, got {self.dt!r}")


@dataclass(frozen=True)
class Observation:
    """The 14-dimensional state the agent observes, in the reset frame."""

    x_c: float
    y_c: float
    x_d: float
    y_d: float
    theta_c: float
    omega_l: float
    omega_r: float
    phi_l: float
    phi_r: float
    phi_dot_l: float
    phi_dot_r: float
    v_x: float
    v_y: float
    theta_dot: float

    FIELD_NAMES = (
        "x_c",
        "y_c",
        "x_d",
        "y_d",
        "theta_c",
        "omega_l",
        "omega_r",
        "phi_l",
        "phi_r",
        "phi_dot_l",
        "phi_dot_r",
        "v_x",
        "v_y",
        "theta_dot",
    )

    def to_array(self) -> np.ndarray:
        return np.array(
            [getattr(self, name) for name in self.FIELD_NAMES], dtype=float
        )


@dataclass(frozen=True)
class Action:
    """Normalized (spin, steering) command; components clamped to [-1, 1]."""

    a_omega: float
    a_phi: float


@dataclass(frozen=True)
class StepResult:
    observation: Observation
    reward: float
    terminated: bool
    truncated: bool
    info: dict


@dataclass(frozen=True)
class SpaceBounds:
    low: np.ndarray
    high: np.ndarray
    names: tuple = ()


def clamp_action(action) -> Action:
    """Validate and clamp a raw action to [-1, 1]^2."""
    if isinstance(action, Action):
        a_omega, a_phi = action.a_omega, action.a_phi
    else:
        flat = np.asarray(action, dtype=float).reshape(-1)
        if flat.shape != (2,):
            raise ValueError(f"action must have 2 components, got {action!r}")
        a_omega, a_phi = float(flat[0]), float(flat[1])
    if not (math.isfinite(a_omega) and math.isfinite(a_phi)):
        raise ValueError(f"action components must be finite, got {action!r}")
    return Action(
        a_omega=min(1.0, max(-1.0, a_omega)),
        a_phi=min(1.0, max(-1.0, a_phi)),
    )


def body_frame_displacement(pose: Pose, goal):
    """Goal displacement rotated into the robot body frame."""
    dx_w = goal[0] - pose.x
    dy_w = goal[1] - pose.y
    cos_t = math.cos(pose.theta)
    sin_t = math.sin(pose.theta)
    return cos_t * dx_w + sin_t * dy_w, -sin_t * dx_w + cos_t * dy_w


class DasmrEnv:
    """Single-instance, seeded, deterministic episodic environment.

    One instance is single-threaded; run several instances for parallelism.
    """

    def __init__(self, config: EnvConfig = EnvConfig(), params: RobotParams = None):
        self.config = config
        self.params = params if params is not None else RobotParams()
        self._rng = np.random.default_rng(config.seed)
        self._state: SimState = None
        self._goal = None
        self._anchor = config.reset_robot_pose
        self._episode_over = True
        self._path_length = 0.0
        self._last_distance = None

    @property
    def goal(self):
        return self._goal

    @property
    def state(self) -> SimState:
        return self._state

    @property
    def world_anchor(self) -> Pose:
        """World pose of the current reset frame's origin."""
        return self._anchor

    def reset(self, seed: int = None, goal=None):
        """Start a new episode; returns (observation, goal).

        With `continuous_goals` the physical state carries over and only the
        frame is re-anchored at the robot; otherwise the robot is placed at
        the configured reset pose, at rest with zero steering. The goal is
        sampled uniformly from the goal square unless given explicitly.
        """
        if seed is not None:
            self._rng = np.random.default_rng(seed)
        if self.config.continuous_goals and self._state is not None:
            self._anchor = self._compose_world_pose(self._state.pose)
            self._state = rebased(self._state)
        else:
            self._anchor = self.config.reset_robot_pose
            self._state = initial_state()
        if goal is None:
            extent = self.config.goal_half_extent
            sample = self._rng.uniform(-extent, extent, size=2)
            self._goal = (float(sample[0]), float(sample[1]))
        else:
            self._goal = (float(goal[0]), float(goal[1]))
        self._episode_over = False
        self._path_length = 0.0
        self._last_distance = math.hypot(self._goal[0], self._goal[1])
        return self._observation(), self._goal

    def step(self, action) -> StepResult:
        """Advance one control period; returns the full step result."""
        if self._state is None:
            raise RuntimeError("step() before reset()")
        if self._episode_over:
            raise RuntimeError("episode is over; call reset()")
        act = clamp_action(action)
        target = VirtualBicycleCommand(
            omega_c=act.a_omega * self.params.max_wheel_spin,
            phi_c=act.a_phi * self.params.max_steer_angle,
        )
        previous = self._state.pose
        self._state = simulate_step(self._state, target, self.params, self.config.dt)
        pose = self._state.pose
        self._path_length += math.hypot(pose.x - previous.x, pose.y - previous.y)

        dx_b, dy_b = body_frame_displacement(pose, self._goal)
        # sqrt of summed squares: bit-identical to the reward family's d, so
        # the sparse reward and the success test can never disagree
        distance = math.sqrt(dx_b * dx_b + dy_b * dy_b)
        self._last_distance = distance
        reward = float(evaluate(self.config.reward, dx_b, dy_b))

        terminated = distance < self.config.d_th
        truncation_reason = None
        if not terminated:
            if self._state.step_index >= self.config.max_episode_steps:
                truncation_reason = TRUNCATION_TIME
            elif (
                abs(pose.x) > self.config.workspace_half_extent
                or abs(pose.y) > self.config.workspace_half_extent
            ):
                truncation_reason = TRUNCATION_BOUNDS
        truncated = truncation_reason is not None
        self._episode_over = terminated or truncated

        info = {
            "distance": distance,
            "step": self._state.step_index,
            "path_length": self._path_length,
            "action": (act.a_omega, act.a_phi),
        }
        if truncation_reason is not None:
            info["truncation_reason"] = truncation_reason
        return StepResult(self._observation(), reward, terminated, truncated, info)

    def action_space(self) -> SpaceBounds:
        return SpaceBounds(
            low=np.array([-1.0, -1.0]),
            high=np.array([1.0, 1.0]),
            names=("a_omega", "a_phi"),
        )

    def observation_space(self) -> SpaceBounds:
        p = self.params
        c = self.config
        # Outer wheel spins faster than the central command by the ratio of
        # ICR distances; both that ratio and the inner steering angle peak at
        # full lock. Yaw rate peaks at full lock and full spin.
        y_lock = p.wheelbase_L / math.tan(p.max_steer_angle)
        spin_ratio = math.hypot(
            y_lock + 0.5 * p.track_W, p.wheelbase_L
        ) / math.hypot(y_lock, p.wheelbase_L)
        max_spin = p.max_wheel_spin * spin_ratio
        max_yaw = p.max_rim_speed / math.hypot(y_lock, p.wheelbase_L)
        phi_lock = float(inner_outer_steering(p.max_steer_angle, p)[0])
        # The wheel steering rate is the virtual rate times the slope of the
        # inner-wheel map; bound the slope on a dense sweep of the range.
        sweep = np.linspace(0.0, p.max_steer_angle, 2001)
        inner, _ = inner_outer_steering(sweep, p)
        slope = float(np.max(np.diff(inner) / np.diff(sweep)))
        max_phi_rate = p.max_steer_rate * max(slope, 1.0)
        ws = c.workspace_half_extent
        gs = c.goal_half_extent
        v = p.max_rim_speed
        high = np.array(
            [ws, ws, gs, gs, math.pi, max_spin, max_spin, phi_lock, phi_lock,
             max_phi_rate, max_phi_rate, v, v, max_yaw]
        )
        return SpaceBounds(low=-high, high=high, names=Observation.FIELD_NAMES)

    def _compose_world_pose(self, rel: Pose) -> Pose:
        a = self._anchor
        cos_a = math.cos(a.theta)
        sin_a = math.sin(a.theta)
        return Pose(
            x=a.x + cos_a * rel.x - sin_a * rel.y,
            y=a.y + sin_a * rel.x + cos_a * rel.y,
            theta=float(wrap_angle(a.theta + rel.theta)),
        )

    def _observation(self) -> Observation:
        s = self._state
        return Observation(
            x_c=s.pose.x,
            y_c=s.pose.y,
            x_d=self._goal[0],
            y_d=self._goal[1],
            theta_c=s.pose.theta,
            omega_l=s.wheels.omega_l,
            omega_r=s.wheels.omega_r,
            phi_l=s.wheels.phi_l,
            phi_r=s.wheels.phi_r,
            phi_dot_l=s.phi_dot_l,
            phi_dot_r=s.phi_dot_r,
            v_x=s.v_x,
            v_y=s.v_y,
            theta_dot=s.theta_dot,
        )


def make_env(config: EnvConfig = None, params: RobotParams = None) -> DasmrEnv:
    """Convenience constructor with defaults."""
    return DasmrEnv(config if config is not None else EnvConfig(), params)
