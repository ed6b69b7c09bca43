"""Double-Ackermann steering geometry for a symmetric negative 4WS platform.

The four steered wheels sit at (+-L, +-W/2) in the chassis frame, with the
rear steering angles mirroring the front ones (equal magnitude, opposite
sign). The whole platform is commanded through a virtual central bicycle
pair: spin omega_c and steering phi_c. Because the rear mirrors the front,
the instantaneous center of rotation always lies on the lateral axis through
the chassis center, at offset L / tan(|phi_c|).

Every function is pure and accepts plain floats or numpy arrays elementwise,
so the same code drives the scalar simulator and batched planner rollouts.
"""

import math
from dataclasses import dataclass

import numpy as np

HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class RobotParams:
    """Geometry and actuation limits of the vehicle.

    ``wheelbase_L`` is the longitudinal offset of each axle from the chassis
    center (front axle at +L, rear at -L); ``track_W`` the lateral distance
    between left and right wheels. ``max_wheel_spin`` and ``max_steer_angle``
    scale the normalized commands; the rate/acceleration limits bound how
    fast the virtual command may move between steps.
    """

    wheelbase_L: float = 0.3
    track_W: float = 0.5
    wheel_radius: float = 0.13
    max_wheel_spin: float = 7.7
    max_steer_angle: float = 0.436
    max_steer_rate: float = 1.0
    max_wheel_spin_accel: float = 5.0

    def __post_init__(self):
        for name in (
            "wheelbase_L",
            "track_W",
            "wheel_radius",
            "max_wheel_spin",
            "max_steer_angle",
            "max_steer_rate",
            "max_wheel_spin_accel",
        ):
            value = getattr(self, name)
            if not value > 0.0:
                raise ValueError(f"RobotParams.{name} must be > 0, got {value!r}")
        if not self.max_steer_angle < HALF_PI:
            raise ValueError(
                f"max_steer_angle must be < pi/2, got {self.max_steer_angle!r}"
            )
        # At full lock the inner wheel steers sharper than the central command;
        # beyond this bound it would need |phi_i| >= pi/2 (ICR inside the track).
        if not math.tan(self.max_steer_angle) < 2.0 * self.wheelbase_L / self.track_W:
            raise ValueError(
                "max_steer_angle too large for the L/W geometry: "
                "tan(max_steer_angle) must be < 2*wheelbase_L/track_W"
            )

    @property
    def max_rim_speed(self) -> float:
        """Rim speed of a wheel spinning at max_wheel_spin, in m/s."""
        return self.max_wheel_spin * self.wheel_radius


@dataclass(frozen=True)
class VirtualBicycleCommand:
    """Spin (rad/s) and steering (rad) of the virtual central wheel pair."""

    omega_c: float = 0.0
    phi_c: float = 0.0


@dataclass(frozen=True)
class WheelState:
    """Per-side wheel spin and steering (front wheels; rear mirror steering)."""

    omega_l: float = 0.0
    omega_r: float = 0.0
    phi_l: float = 0.0
    phi_r: float = 0.0


def inner_outer_steering(phi_c, params: RobotParams):
    """Steering angles of the inner and outer wheels for a central angle.

    phi_i = atan(2L sin|phi_c| / (2L cos|phi_c| - W sin|phi_c|)), and the
    outer angle takes + in the denominator. Outputs carry the sign of phi_c;
    |phi_o| <= |phi_c| <= |phi_i|.
    """
    a = np.abs(phi_c)
    s = np.sign(phi_c)
    two_l = 2.0 * params.wheelbase_L
    num = two_l * np.sin(a)
    cos_term = two_l * np.cos(a)
    lateral = params.track_W * np.sin(a)
    phi_i = s * np.arctan2(num, cos_term - lateral)
    phi_o = s * np.arctan2(num, cos_term + lateral)
    return phi_i, phi_o


def inner_outer_spin(omega_c, phi_i, params: RobotParams):
    """Spin of the inner and outer wheels given the inner steering angle.

    The wheels share the angular rate about the ICR, so spins scale with the
    distance to it: omega_i/o = omega_c * dist_i/o / dist_center, with
    dist = hypot(L tan(pi/2 - |phi_i|) + offset, L). phi_i = 0 degenerates to
    straight driving with equal spins.
    """
    a = np.abs(phi_i)
    if np.any(a >= HALF_PI):
        raise ValueError("inner steering angle must satisfy |phi_i| < pi/2")
    L = params.wheelbase_L
    W = params.track_W
    straight = a == 0.0
    # tan(pi/2 - a) blows up at a = 0; mask the degenerate case exactly.
    y_inner = L * np.tan(HALF_PI - np.where(straight, 1.0, a))
    d_inner = np.hypot(y_inner, L)
    d_center = np.hypot(y_inner + 0.5 * W, L)
    d_outer = np.hypot(y_inner + W, L)
    omega_i = np.where(straight, omega_c, omega_c * d_inner / d_center)
    omega_o = np.where(straight, omega_c, omega_c * d_outer / d_center)
    return omega_i, omega_o


def assign_left_right(phi_c, inner, outer) -> WheelState:
    """Map (spin, steering-magnitude) pairs for inner/outer wheels to sides.

    For phi_c >= 0 (left turn) the left wheel is the inner one; for phi_c < 0
    the roles are reversed. Steering angles receive the sign of phi_c.
    """
    omega_i, phi_i = inner
    omega_o, phi_o = outer
    left_turn = np.greater_equal(phi_c, 0.0)
    s = np.where(left_turn, 1.0, -1.0)
    return WheelState(
        omega_l=np.where(left_turn, omega_i, omega_o),
        omega_r=np.where(left_turn, omega_o, omega_i),
        phi_l=s * np.where(left_turn, phi_i, phi_o),
        phi_r=s * np.where(left_turn, phi_o, phi_i),
    )


def wheel_state(cmd: VirtualBicycleCommand, params: RobotParams) -> WheelState:
    """Full four-wheel state for a virtual bicycle command."""
    phi_i, phi_o = inner_outer_steering(np.abs(cmd.phi_c), params)
    omega_i, omega_o = inner_outer_spin(cmd.omega_c, phi_i, params)
    return assign_left_right(cmd.phi_c, (omega_i, phi_i), (omega_o, phi_o))


def chassis_rates(cmd: VirtualBicycleCommand, params: RobotParams):
    """Body-frame forward speed (m/s) and yaw rate (rad/s) of the center.

    The ICR sits at lateral offset Y = L tan(pi/2 - |phi_c|) from the center,
    the virtual central wheel at longitudinal offset L, so the common angular
    rate is rim_speed / hypot(Y, L) and the center moves at Y times that.
    phi_c = 0 degenerates to (rim_speed, 0). The center never has lateral
    body velocity: the ICR stays on the lateral axis.
    """
    a = np.abs(cmd.phi_c)
    s = np.sign(cmd.phi_c)
    rim = cmd.omega_c * params.wheel_radius
    straight = a == 0.0
    y_icr = params.wheelbase_L * np.tan(HALF_PI - np.where(straight, 1.0, a))
    d_center = np.hypot(y_icr, params.wheelbase_L)
    v_body = np.where(straight, rim, rim * y_icr / d_center)
    theta_dot = np.where(straight, 0.0, s * rim / d_center)
    return v_body, theta_dot


def icr_offset(phi_c, params: RobotParams):
    """Signed lateral ICR offset from the chassis center; +inf when straight.

    Also the turning radius of the center point: |offset| = L / tan(|phi_c|).
    """
    a = np.abs(phi_c)
    s = np.sign(phi_c)
    straight = a == 0.0
    y = params.wheelbase_L * np.tan(HALF_PI - np.where(straight, 1.0, a))
    return np.where(straight, np.inf, s * y)
