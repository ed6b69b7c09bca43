"""Goal-relative reward fields for maneuvering non-holonomic platforms.

All rewards are scalar functions of the displacement (dx, dy) from robot to
goal in the robot body frame: x longitudinal, y lateral. The maneuver-aware
shapes (hourglass, ellipse, Chebyshev, clover) weigh lateral error more than
longitudinal error, so temporarily driving away from the goal along the
longitudinal axis costs little — which is exactly what multi-point maneuvers
require. Euclidean and sparse baselines are included for comparison.

Functions are pure and elementwise over numpy arrays.
"""

import math
from dataclasses import dataclass

import numpy as np

HALF_PI = math.pi / 2.0

REWARD_KINDS = ("hs", "es", "ch", "cl", "euclid", "sparse")


@dataclass(frozen=True)
class Displacement:
    """Robot-to-goal displacement in the robot body frame, meters."""

    dx: float
    dy: float

    @property
    def d(self) -> float:
        """Euclidean distance to the goal."""
        return math.sqrt(self.dx * self.dx + self.dy * self.dy)


@dataclass(frozen=True)
class RewardSpec:
    """Selects a reward shape and its parameters.

    `c` weights the lateral error (hourglass/ellipse/clover); `d_th` is the
    distance threshold used by the clover and sparse shapes.
    """

    kind: str = "hs"
    c: float = 2.0
    d_th: float = 0.15

    def __post_init__(self):
        if self.kind not in REWARD_KINDS:
            raise ValueError(
                f"unknown reward kind {self.kind!r}; expected one of {REWARD_KINDS}"
            )
        if not self.c > 0.0:
            raise ValueError(f"RewardSpec.c must be > 0, got {self.c!r}")
        if not self.d_th > 0.0:
            raise ValueError(f"RewardSpec.d_th must be > 0, got {self.d_th!r}")

    def label(self) -> str:
        if self.kind in ("hs", "es"):
            return f"{self.kind}(c={self.c:g})"
        if self.kind == "cl":
            return f"cl(c={self.c:g},d_th={self.d_th:g})"
        if self.kind == "sparse":
            return f"sparse(d_th={self.d_th:g})"
        return self.kind


def hourglass(dx, dy, c):
    """-sqrt(dx^2 + (c*(dy + sign(dy)*max(0, |dy|-|dx|)))^2).

    Outside the |dy| <= |dx| cone the lateral error is stretched by its
    excess over the longitudinal error, pinching the level sets into an
    hourglass; inside the cone this is identical to the ellipse shape.
    """
    excess = np.maximum(0.0, np.abs(dy) - np.abs(dx))
    stretched = dy + np.sign(dy) * excess
    return -np.sqrt(dx * dx + (c * stretched) ** 2)


def ellipse(dx, dy, c):
    """-sqrt(dx^2 + (c*dy)^2): Euclidean with the lateral axis scaled by c."""
    return -np.sqrt(dx * dx + (c * dy) ** 2)


def chebyshev(dx, dy):
    """-max(|dx|, |dy|): square level sets."""
    return -np.maximum(np.abs(dx), np.abs(dy))


def clover(dx, dy, c, d_th):
    """Directionally weighted shape, active only near-ish the goal laterally.

    For dy > d_th: atan(dy/dx) * c * exp(d_th - d), taking the principal
    branch and the limit +pi/2 at dx = 0; otherwise -d.
    """
    d = np.sqrt(dx * dx + dy * dy)
    on_axis = dx == 0.0
    angle = np.where(
        on_axis, HALF_PI, np.arctan(dy / np.where(on_axis, 1.0, dx))
    )
    return np.where(dy > d_th, angle * c * np.exp(d_th - d), -d)


def euclidean(dx, dy):
    """-d: plain negative Euclidean distance.

    Written as sqrt of the summed squares so that it is bit-identical to the
    ellipse shape at c = 1 and to the distances the episode logic uses.
    """
    return -np.sqrt(dx * dx + dy * dy)


def sparse(dx, dy, d_th):
    """0 within the success threshold (d < d_th, strict), else -1."""
    return np.where(np.sqrt(dx * dx + dy * dy) < d_th, 0.0, -1.0)


def reward_hs(disp: Displacement, c: float) -> float:
    return float(hourglass(disp.dx, disp.dy, c))


def reward_es(disp: Displacement, c: float) -> float:
    return float(ellipse(disp.dx, disp.dy, c))


def reward_ch(disp: Displacement) -> float:
    return float(chebyshev(disp.dx, disp.dy))


def reward_cl(disp: Displacement, c: float, d_th: float) -> float:
    return float(clover(disp.dx, disp.dy, c, d_th))


def reward_euclid(disp: Displacement) -> float:
    return float(euclidean(disp.dx, disp.dy))


def reward_sparse(disp: Displacement, d_th: float) -> float:
    return float(sparse(disp.dx, disp.dy, d_th))


def evaluate(spec: RewardSpec, dx, dy):
    """Evaluate the selected reward; elementwise over arrays."""
    if spec.kind == "hs":
        return hourglass(dx, dy, spec.c)
    if spec.kind == "es":
        return ellipse(dx, dy, spec.c)
    if spec.kind == "ch":
        return chebyshev(dx, dy)
    if spec.kind == "cl":
        return clover(dx, dy, spec.c, spec.d_th)
    if spec.kind == "euclid":
        return euclidean(dx, dy)
    return sparse(dx, dy, spec.d_th)


def reward_field(spec: RewardSpec, x_range, y_range, resolution):
    """Reward over a grid of goal positions with the robot at the origin.

    `resolution` is the number of samples per axis (int, or (nx, ny)).
    Returns (xs, ys, field) with field[iy, ix] = reward at goal (xs[ix], ys[iy]).
    """
    if np.isscalar(resolution):
        nx = ny = int(resolution)
    else:
        nx, ny = (int(r) for r in resolution)
    if nx < 2 or ny < 2:
        raise ValueError(f"resolution must be >= 2 per axis, got {resolution!r}")
    x_lo, x_hi = (float(v) for v in x_range)
    y_lo, y_hi = (float(v) for v in y_range)
    if not (x_hi > x_lo and y_hi > y_lo):
        raise ValueError("grid ranges must be non-degenerate (hi > lo)")
    xs = _axis(x_lo, x_hi, nx)
    ys = _axis(y_lo, y_hi, ny)
    dx, dy = np.meshgrid(xs, ys)
    return xs, ys, evaluate(spec, dx, dy)


def _axis(lo, hi, n):
    axis = np.linspace(lo, hi, n)
    if lo == -hi:
        # exact mirror pairing, so even shapes produce exactly even grids
        axis = (axis - axis[::-1]) / 2.0
    return axis
