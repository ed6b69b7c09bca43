"""Discrete-time vehicle simulator: actuator rate limiting and exact arc
integration of the chassis pose at a fixed control rate (default 40 Hz).

States are immutable values; `simulate_step` is a pure transition, so two
identical calls produce bit-identical results and independent simulations can
run concurrently.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .kinematics import (
    RobotParams,
    VirtualBicycleCommand,
    WheelState,
    chassis_rates,
    wheel_state,
)

TWO_PI = 2.0 * math.pi

DEFAULT_DT = 0.025  # 40 Hz control period, seconds

# Yaw rates below this are integrated as straight segments.
STRAIGHT_YAW_EPS = 1e-9


def wrap_angle(theta):
    """Wrap an angle to (-pi, pi]."""
    wrapped = np.remainder(theta + math.pi, TWO_PI) - math.pi
    return np.where(wrapped == -math.pi, math.pi, wrapped)


@dataclass(frozen=True)
class Pose:
    """Planar pose: position in meters, heading in (-pi, pi]."""

    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0


@dataclass(frozen=True)
class SimState:
    """Full vehicle state after a step.

    `cmd` is the rate-limited virtual bicycle command actually applied (the
    actuator state); `wheels` the four-wheel state derived from it. Steering
    rates are exact last-step differences; v_x/v_y are the center velocity in
    the frame the pose is expressed in.
    """

    pose: Pose
    cmd: VirtualBicycleCommand
    wheels: WheelState
    phi_dot_l: float = 0.0
    phi_dot_r: float = 0.0
    v_x: float = 0.0
    v_y: float = 0.0
    theta_dot: float = 0.0
    step_index: int = 0


def initial_state(pose: Pose = Pose()) -> SimState:
    """State at rest: zero command, zero steering, zero rates."""
    return SimState(pose=pose, cmd=VirtualBicycleCommand(), wheels=WheelState())


def rate_limit(current, target, max_delta, bound):
    """Move `current` toward `target` by at most `max_delta`, within +-bound."""
    step = np.clip(target - current, -max_delta, max_delta)
    return np.clip(current + step, -bound, bound)


def apply_actuators(
    target: VirtualBicycleCommand,
    current: SimState,
    dt: float,
    params: RobotParams,
) -> VirtualBicycleCommand:
    """Advance the virtual command toward `target` under rate/accel limits."""
    if not dt > 0.0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    return VirtualBicycleCommand(
        omega_c=rate_limit(
            current.cmd.omega_c,
            target.omega_c,
            params.max_wheel_spin_accel * dt,
            params.max_wheel_spin,
        ),
        phi_c=rate_limit(
            current.cmd.phi_c,
            target.phi_c,
            params.max_steer_rate * dt,
            params.max_steer_angle,
        ),
    )


def advance_pose(x, y, theta, v_body, theta_dot, dt):
    """Exact arc/straight integration of a planar pose over one period.

    Elementwise over arrays. |theta_dot| < STRAIGHT_YAW_EPS integrates as a
    straight segment of length v_body*dt along the current heading; otherwise
    the pose follows a circular arc of radius v_body/theta_dot exactly.
    """
    turning = np.abs(theta_dot) >= STRAIGHT_YAW_EPS
    safe_rate = np.where(turning, theta_dot, 1.0)
    radius = v_body / safe_rate
    theta_end = theta + theta_dot * dt
    sin0 = np.sin(theta)
    cos0 = np.cos(theta)
    dx = np.where(
        turning, radius * (np.sin(theta_end) - sin0), v_body * dt * cos0
    )
    dy = np.where(
        turning, -radius * (np.cos(theta_end) - cos0), v_body * dt * sin0
    )
    theta_new = np.where(turning, wrap_angle(theta_end), theta)
    return x + dx, y + dy, theta_new


def step_pose(pose: Pose, v_body: float, theta_dot: float, dt: float) -> Pose:
    """Integrate one pose step along an exact arc (or straight segment)."""
    if not dt > 0.0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    x, y, theta = advance_pose(pose.x, pose.y, pose.theta, v_body, theta_dot, dt)
    return Pose(float(x), float(y), float(theta))


def simulate_step(
    state: SimState,
    action_target: VirtualBicycleCommand,
    params: RobotParams,
    dt: float = DEFAULT_DT,
) -> SimState:
    """One control period: actuators -> wheel geometry -> pose integration."""
    cmd = apply_actuators(action_target, state, dt, params)
    cmd = VirtualBicycleCommand(float(cmd.omega_c), float(cmd.phi_c))
    wheels = wheel_state(cmd, params)
    wheels = WheelState(
        float(wheels.omega_l),
        float(wheels.omega_r),
        float(wheels.phi_l),
        float(wheels.phi_r),
    )
    v_body, theta_dot = chassis_rates(cmd, params)
    pose = step_pose(state.pose, float(v_body), float(theta_dot), dt)
    return SimState(
        pose=pose,
        cmd=cmd,
        wheels=wheels,
        phi_dot_l=(wheels.phi_l - state.wheels.phi_l) / dt,
        phi_dot_r=(wheels.phi_r - state.wheels.phi_r) / dt,
        v_x=float(v_body) * math.cos(pose.theta),
        v_y=float(v_body) * math.sin(pose.theta),
        theta_dot=float(theta_dot),
        step_index=state.step_index + 1,
    )


def rebased(state: SimState) -> SimState:
    """Same physical state expressed in the robot's current frame.

    Pose zeroes out; the center velocity, being purely longitudinal, becomes
    (speed, 0). Wheel and actuator state are frame-independent.
    """
    speed = math.hypot(state.v_x, state.v_y)
    v_body = math.copysign(speed, state.cmd.omega_c) if speed > 0.0 else 0.0
    return replace(
        state,
        pose=Pose(),
        v_x=v_body,
        v_y=0.0,
        step_index=0,
    )
