"""
Reward landscapes
=================

Renders the maneuver-aware reward shapes side by side. Each heatmap shows
the reward a goal at that position would yield with the robot sitting at
the origin facing +x. The hourglass and ellipse weigh lateral error more
than longitudinal error; the Chebyshev shape penalizes the worse axis; the
clover acts only when the goal is far to the left; Euclidean is the
classic baseline.

Writes reward_landscapes.png next to this script.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dasmr import RewardSpec, reward_field
from dasmr.rewards import ellipse, hourglass

SHAPES = [
    RewardSpec("es", c=4.0),
    RewardSpec("ch"),
    RewardSpec("hs", c=2.0),
    RewardSpec("cl", c=3.0, d_th=0.15),
    RewardSpec("euclid"),
]

fig, axes = plt.subplots(1, len(SHAPES), figsize=(4 * len(SHAPES), 3.6))
for ax, spec in zip(axes, SHAPES):
    xs, ys, field = reward_field(spec, (-4, 4), (-4, 4), 201)
    im = ax.imshow(field, origin="lower", extent=(-4, 4, -4, 4), cmap="viridis")
    ax.set_title(spec.label())
    ax.set_xlabel("goal x [m]")
    ax.set_ylabel("goal y [m]")
    fig.colorbar(im, ax=ax, shrink=0.85)
fig.tight_layout()
out = os.path.join(os.path.dirname(__file__), "reward_landscapes.png")
fig.savefig(out, dpi=110)
print(f"wrote {out}")

# The hourglass trick in numbers: pure lateral displacement is expensive,
# but trading it for longitudinal displacement is free inside the cone.
print("\nreward at a pure-lateral goal (0, 2) vs a diagonal goal (2, 2):")
for dx, dy in [(0.0, 2.0), (2.0, 2.0)]:
    print(f"  ({dx:g},{dy:g}): hourglass {hourglass(dx, dy, 2.0):7.3f}   "
          f"ellipse {ellipse(dx, dy, 2.0):7.3f}")
print("inside |dy| <= |dx| both agree exactly:",
      hourglass(3.0, 1.5, 2.0) == ellipse(3.0, 1.5, 2.0))
