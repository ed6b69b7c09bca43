"""
Double-Ackermann steering geometry
==================================

How one virtual bicycle command fans out into four wheel commands, and why
all four wheels agree on a single instantaneous center of rotation (ICR).
"""

import math

import numpy as np

from dasmr import (
    RobotParams,
    VirtualBicycleCommand,
    chassis_rates,
    icr_offset,
    wheel_state,
)

params = RobotParams()
print(f"robot: L={params.wheelbase_L} m (axle offset from center), "
      f"W={params.track_W} m, wheel radius {params.wheel_radius} m")
print(f"turning radius at full lock: "
      f"{params.wheelbase_L / math.tan(params.max_steer_angle):.3f} m\n")

# A sweep of steering commands at constant spin. The inner wheel always
# steers sharper and spins slower; the outer wheel does the opposite.
print(f"{'phi_c':>8} {'phi_left':>9} {'phi_right':>9} "
      f"{'om_left':>8} {'om_right':>8} {'radius':>8}")
for phi_c in np.linspace(0.0, params.max_steer_angle, 8):
    cmd = VirtualBicycleCommand(omega_c=5.0, phi_c=float(phi_c))
    ws = wheel_state(cmd, params)
    radius = icr_offset(cmd.phi_c, params)
    print(f"{phi_c:8.3f} {ws.phi_l:9.3f} {ws.phi_r:9.3f} "
          f"{ws.omega_l:8.3f} {ws.omega_r:8.3f} {radius:8.3f}")

# Verify the ICR property at one configuration: every wheel's velocity is
# perpendicular to its radius from the ICR and all share one angular rate.
phi_c = 0.3
cmd = VirtualBicycleCommand(omega_c=5.0, phi_c=phi_c)
ws = wheel_state(cmd, params)
v_body, theta_dot = chassis_rates(cmd, params)
icr = (0.0, float(icr_offset(phi_c, params)))
L, W = params.wheelbase_L, params.track_W
wheels = {
    "front-left": ((L, W / 2), ws.phi_l, ws.omega_l),
    "front-right": ((L, -W / 2), ws.phi_r, ws.omega_r),
    "rear-left": ((-L, W / 2), -ws.phi_l, ws.omega_l),
    "rear-right": ((-L, -W / 2), -ws.phi_r, ws.omega_r),
}
print(f"\nICR at (0, {icr[1]:.3f}); chassis yaw rate {theta_dot:.4f} rad/s")
for name, ((px, py), steer, spin) in wheels.items():
    dist = math.hypot(px - icr[0], py - icr[1])
    rate = spin * params.wheel_radius / dist
    print(f"  {name:>11}: distance to ICR {dist:.3f} m, "
          f"rim speed / distance = {rate:.4f} rad/s")
