import math

import numpy as np
import pytest

from dasmr.kinematics import RobotParams, VirtualBicycleCommand, wheel_state
from dasmr.simulator import (
    DEFAULT_DT,
    Pose,
    SimState,
    apply_actuators,
    initial_state,
    simulate_step,
    step_pose,
    wrap_angle,
)

PARAMS = RobotParams()


def settled_state(omega_c, phi_c):
    """State whose actuators already sit at the requested command."""
    cmd = VirtualBicycleCommand(omega_c, phi_c)
    wheels = wheel_state(cmd, PARAMS)
    return SimState(pose=Pose(), cmd=cmd, wheels=wheels)


def fit_circle(points):
    """Kasa least-squares circle fit; returns (cx, cy, radius, max residual)."""
    pts = np.asarray(points)
    a = np.column_stack([pts[:, 0], pts[:, 1], np.ones(len(pts))])
    b = (pts ** 2).sum(axis=1)
    (cx2, cy2, c0), *_ = np.linalg.lstsq(a, b, rcond=None)
    cx, cy = cx2 / 2.0, cy2 / 2.0
    radius = math.sqrt(c0 + cx * cx + cy * cy)
    residual = np.max(np.abs(np.hypot(pts[:, 0] - cx, pts[:, 1] - cy) - radius))
    return cx, cy, radius, residual


class TestWrapAngle:
    def test_range(self):
        thetas = np.linspace(-10.0, 10.0, 10_001)
        wrapped = wrap_angle(thetas)
        assert np.all(wrapped > -math.pi)
        assert np.all(wrapped <= math.pi)

    def test_boundary(self):
        assert wrap_angle(math.pi) == math.pi
        assert wrap_angle(-math.pi) == math.pi
        assert wrap_angle(0.0) == 0.0


class TestApplyActuators:
    def test_fixed_point(self):
        state = settled_state(2.0, 0.2)
        out = apply_actuators(state.cmd, state, DEFAULT_DT, PARAMS)
        assert out == state.cmd

    def test_steer_rate_saturation(self):
        state = initial_state()
        target = VirtualBicycleCommand(0.0, PARAMS.max_steer_angle)
        out = apply_actuators(target, state, 0.025, PARAMS)
        assert out.phi_c == PARAMS.max_steer_rate * 0.025

    def test_within_limits_reaches_target(self):
        state = settled_state(1.0, 0.1)
        target = VirtualBicycleCommand(1.0 + 0.05, 0.1 + 0.01)
        out = apply_actuators(target, state, DEFAULT_DT, PARAMS)
        assert out.omega_c == pytest.approx(target.omega_c, abs=0)
        assert out.phi_c == pytest.approx(target.phi_c, abs=0)

    def test_absolute_clamp(self):
        state = settled_state(PARAMS.max_wheel_spin, PARAMS.max_steer_angle)
        target = VirtualBicycleCommand(99.0, 9.0)
        out = apply_actuators(target, state, DEFAULT_DT, PARAMS)
        assert out.omega_c == PARAMS.max_wheel_spin
        assert out.phi_c == PARAMS.max_steer_angle

    def test_bad_dt(self):
        with pytest.raises(ValueError):
            apply_actuators(VirtualBicycleCommand(), initial_state(), 0.0, PARAMS)


class TestStepPose:
    def test_at_rest(self):
        pose = Pose(1.0, 2.0, 0.5)
        assert step_pose(pose, 0.0, 0.0, DEFAULT_DT) == pose

    def test_straight(self):
        out = step_pose(Pose(), 1.0, 0.0, 0.025)
        assert out == Pose(0.025, 0.0, 0.0)

    def test_quarter_circle_exact(self):
        # radius 2 circle: after a quarter turn the pose is (R, R, pi/2)
        radius = 2.0
        theta_dot = math.pi / 8.0
        v = radius * theta_dot
        pose = Pose()
        for _ in range(160):  # 160 * 0.025 s * pi/8 rad/s = pi/2
            pose = step_pose(pose, v, theta_dot, 0.025)
        assert abs(pose.x - radius) < 1e-9
        assert abs(pose.y - radius) < 1e-9
        assert abs(pose.theta - math.pi / 2) < 1e-9


class TestSimulateStep:
    def test_zero_command_from_rest(self):
        state = initial_state()
        out = simulate_step(state, VirtualBicycleCommand(), PARAMS)
        assert out.pose == state.pose
        assert out.v_x == 0.0 and out.v_y == 0.0 and out.theta_dot == 0.0
        assert out.step_index == 1

    def test_straight_displacement_linear(self):
        omega = 4.0
        state = settled_state(omega, 0.0)
        for _ in range(200):
            state = simulate_step(state, VirtualBicycleCommand(omega, 0.0), PARAMS)
        expected = 200 * DEFAULT_DT * omega * PARAMS.wheel_radius
        assert abs(state.pose.x - expected) < 1e-9
        assert state.pose.y == 0.0

    def test_circle_property(self):
        omega, phi = 5.0, 0.3
        state = settled_state(omega, phi)
        points = []
        for _ in range(400):
            state = simulate_step(state, VirtualBicycleCommand(omega, phi), PARAMS)
            points.append((state.pose.x, state.pose.y))
        cx, cy, radius, residual = fit_circle(points)
        assert residual < 1e-6
        assert abs(radius - PARAMS.wheelbase_L / math.tan(phi)) < 1e-9

    def test_nonholonomy(self):
        rng = np.random.default_rng(7)
        state = initial_state()
        for _ in range(300):
            target = VirtualBicycleCommand(
                rng.uniform(-PARAMS.max_wheel_spin, PARAMS.max_wheel_spin),
                rng.uniform(-PARAMS.max_steer_angle, PARAMS.max_steer_angle),
            )
            state = simulate_step(state, target, PARAMS)
            lateral = (
                -math.sin(state.pose.theta) * state.v_x
                + math.cos(state.pose.theta) * state.v_y
            )
            assert abs(lateral) < 1e-12

    def test_rate_limit_compliance(self):
        rng = np.random.default_rng(8)
        state = initial_state()
        for _ in range(300):
            target = VirtualBicycleCommand(
                rng.uniform(-9.0, 9.0), rng.uniform(-0.6, 0.6)
            )
            new = simulate_step(state, target, PARAMS)
            dphi = abs(new.cmd.phi_c - state.cmd.phi_c) / DEFAULT_DT
            domega = abs(new.cmd.omega_c - state.cmd.omega_c) / DEFAULT_DT
            assert dphi <= PARAMS.max_steer_rate + 1e-12
            assert domega <= PARAMS.max_wheel_spin_accel + 1e-12
            assert abs(new.cmd.phi_c) <= PARAMS.max_steer_angle
            assert abs(new.cmd.omega_c) <= PARAMS.max_wheel_spin
            state = new

    def test_steer_rates_are_exact_differences(self):
        state = initial_state()
        for target in [
            VirtualBicycleCommand(3.0, 0.3),
            VirtualBicycleCommand(3.0, -0.2),
            VirtualBicycleCommand(1.0, 0.1),
        ]:
            new = simulate_step(state, target, PARAMS)
            assert new.phi_dot_l == (new.wheels.phi_l - state.wheels.phi_l) / DEFAULT_DT
            assert new.phi_dot_r == (new.wheels.phi_r - state.wheels.phi_r) / DEFAULT_DT
            state = new

    def test_determinism_bit_exact(self):
        rng = np.random.default_rng(9)
        targets = [
            VirtualBicycleCommand(rng.uniform(-7, 7), rng.uniform(-0.4, 0.4))
            for _ in range(100)
        ]

        def run():
            state = initial_state()
            trace = []
            for target in targets:
                state = simulate_step(state, target, PARAMS)
                trace.append((state.pose, state.cmd, state.wheels, state.v_x))
            return trace

        assert run() == run()

    def test_wheels_respect_geometry(self):
        state = settled_state(PARAMS.max_wheel_spin, PARAMS.max_steer_angle)
        out = simulate_step(
            state,
            VirtualBicycleCommand(PARAMS.max_wheel_spin, PARAMS.max_steer_angle),
            PARAMS,
        )
        assert abs(out.wheels.phi_l) < math.pi / 2
        assert abs(out.wheels.phi_r) < math.pi / 2
