"""Desk-scale trajectory optimization and probing tools.

A cross-entropy-method optimizer over open-loop action sequences demonstrates
that goals behind or beside the robot are reachable with the maneuvers the
reward shapes are meant to encourage — in minutes, without training a policy.
Population rollouts run vectorized through the same kinematics kernels as the
scalar simulator; the best sequence found is then re-simulated through the
ordinary environment, and the reported distances/rewards come from that
replay.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .environment import DasmrEnv, EnvConfig
from .kinematics import RobotParams, VirtualBicycleCommand, chassis_rates
from .rewards import RewardSpec, evaluate
from .simulator import advance_pose
from .trajectory import COLUMNS, Episode, run_episode


class ZeroPolicy:
    """Always commands zero spin and zero steering."""

    def __call__(self, obs):
        return (0.0, 0.0)


class ForwardPolicy:
    """Full forward spin, straight steering."""

    def __call__(self, obs):
        return (1.0, 0.0)


class RandomPolicy:
    """Uniform random actions from a private seeded stream."""

    def __init__(self, seed: int = 0):
        self._rng = np.random.default_rng(seed)

    def __call__(self, obs):
        a = self._rng.uniform(-1.0, 1.0, size=2)
        return (float(a[0]), float(a[1]))


class OpenLoopPolicy:
    """Replays a fixed action sequence, one entry per step."""

    def __init__(self, actions):
        self._actions = np.asarray(actions, dtype=float).reshape(-1, 2)
        self._cursor = 0

    def __len__(self):
        return len(self._actions)

    def __call__(self, obs):
        if self._cursor >= len(self._actions):
            raise IndexError("open-loop action sequence exhausted")
        a = self._actions[self._cursor]
        self._cursor += 1
        return (float(a[0]), float(a[1]))

    def rewind(self):
        self._cursor = 0


@dataclass(frozen=True)
class CemConfig:
    """Cross-entropy-method search settings.

    The decision variables are `ceil(horizon / hold)` knots per action
    dimension, each held for `hold` control periods; `hold = 1` optimizes
    every step independently. Holding knots shrinks the search space enough
    that maneuver-length plans converge within the default budget, while the
    actuator rate limits keep the executed commands smooth either way.
    `min_std` floors the refit so exploration survives elite collapse.
    """

    horizon: int = 300
    population: int = 128
    elite_fraction: float = 0.1
    iterations: int = 40
    init_std: float = 0.5
    seed: int = 0
    hold: int = 10
    min_std: float = 0.05

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon!r}")
        if not 0.0 < self.elite_fraction < 1.0:
            raise ValueError(
                f"elite_fraction must be in (0, 1), got {self.elite_fraction!r}"
            )
        if self.population * self.elite_fraction < 2.0:
            raise ValueError(
                "population * elite_fraction must be >= 2 "
                f"(got {self.population} * {self.elite_fraction})"
            )
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations!r}")
        if not self.init_std > 0.0:
            raise ValueError(f"init_std must be > 0, got {self.init_std!r}")
        if self.hold < 1:
            raise ValueError(f"hold must be >= 1, got {self.hold!r}")
        if not 0.0 <= self.min_std <= self.init_std:
            raise ValueError(
                f"min_std must be in [0, init_std], got {self.min_std!r}"
            )


@dataclass
class PlanResult:
    """Outcome of a plan search, as verified by a scalar-environment replay."""

    actions: np.ndarray
    final_distance: float
    cumulative_reward: float
    reached: bool
    steps: int
    episode: Episode
    best_objective_history: list = field(default_factory=list)


def batch_returns(actions, env_config: EnvConfig, params: RobotParams, goal, objective: RewardSpec):
    """Cumulative objective and final goal distance for a batch of sequences.

    `actions` has shape (population, horizon, 2), already in [-1, 1]. Each
    member rolls out under the episode rules: on success its pose freezes and
    its reward stream pads with 0; leaving the workspace freezes the pose and
    pads with the (frozen) boundary reward, so bailing out early never beats
    staying in play. Returns (totals, final_distances).
    """
    population, horizon, _ = actions.shape
    dt = env_config.dt
    ws = env_config.workspace_half_extent
    x = np.zeros(population)
    y = np.zeros(population)
    theta = np.zeros(population)
    cmd_w = np.zeros(population)
    cmd_p = np.zeros(population)
    active = np.ones(population, dtype=bool)
    succeeded = np.zeros(population, dtype=bool)
    totals = np.zeros(population)
    final_d = np.full(population, math.hypot(goal[0], goal[1]))
    max_dw = params.max_wheel_spin_accel * dt
    max_dp = params.max_steer_rate * dt
    for t in range(horizon):
        target_w = actions[:, t, 0] * params.max_wheel_spin
        target_p = actions[:, t, 1] * params.max_steer_angle
        new_w = np.clip(
            cmd_w + np.clip(target_w - cmd_w, -max_dw, max_dw),
            -params.max_wheel_spin,
            params.max_wheel_spin,
        )
        new_p = np.clip(
            cmd_p + np.clip(target_p - cmd_p, -max_dp, max_dp),
            -params.max_steer_angle,
            params.max_steer_angle,
        )
        cmd_w = np.where(active, new_w, cmd_w)
        cmd_p = np.where(active, new_p, cmd_p)
        v_body, theta_dot = chassis_rates(
            VirtualBicycleCommand(cmd_w, cmd_p), params
        )
        nx, ny, ntheta = advance_pose(x, y, theta, v_body, theta_dot, dt)
        x = np.where(active, nx, x)
        y = np.where(active, ny, y)
        theta = np.where(active, ntheta, theta)

        dx_w = goal[0] - x
        dy_w = goal[1] - y
        cos_t = np.cos(theta)
        sin_t = np.sin(theta)
        dx_b = cos_t * dx_w + sin_t * dy_w
        dy_b = -sin_t * dx_w + cos_t * dy_w
        d = np.sqrt(dx_b * dx_b + dy_b * dy_b)
        reward = evaluate(objective, dx_b, dy_b)
        # Frozen poses re-produce their boundary reward; successes pad with 0.
        totals += np.where(succeeded, 0.0, reward)
        final_d = np.where(active, d, final_d)

        new_success = active & (d < env_config.d_th)
        out_of_bounds = active & ~new_success & ((np.abs(x) > ws) | (np.abs(y) > ws))
        succeeded |= new_success
        active &= ~(new_success | out_of_bounds)
        if not active.any():
            # Frozen rewards are constant from here on; close the sums exactly.
            remaining = horizon - 1 - t
            if remaining:
                totals += remaining * np.where(succeeded, 0.0, reward)
            break
    return totals, final_d


def cem_plan(
    env_config: EnvConfig,
    goal,
    objective: RewardSpec,
    cem: CemConfig,
    params: RobotParams = None,
) -> PlanResult:
    """Search for an open-loop action sequence reaching `goal`.

    Samples sequences from a per-step diagonal Gaussian clamped into
    [-1, 1]^2, refits mean/std on the elite set by cumulative objective, and
    tracks the best sample across iterations. Deterministic given cem.seed.
    """
    if params is None:
        params = RobotParams()
    if cem.horizon > env_config.max_episode_steps:
        raise ValueError(
            f"horizon {cem.horizon} exceeds max_episode_steps "
            f"{env_config.max_episode_steps}"
        )
    goal = (float(goal[0]), float(goal[1]))
    rng = np.random.default_rng(cem.seed)
    n_elite = int(round(cem.population * cem.elite_fraction))
    n_knots = -(-cem.horizon // cem.hold)
    mean = np.zeros((n_knots, 2))
    std = np.full((n_knots, 2), cem.init_std)
    best_actions = np.zeros((cem.horizon, 2))
    best_objective = -math.inf
    history = []
    for _ in range(cem.iterations):
        noise = rng.standard_normal((cem.population, n_knots, 2))
        knots = np.clip(mean + std * noise, -1.0, 1.0)
        samples = np.repeat(knots, cem.hold, axis=1)[:, : cem.horizon, :]
        totals, _ = batch_returns(samples, env_config, params, goal, objective)
        order = np.argsort(totals, kind="stable")
        top = order[-1]
        if totals[top] > best_objective:
            best_objective = float(totals[top])
            best_actions = samples[top].copy()
        history.append(best_objective)
        elites = knots[order[-n_elite:]]
        mean = elites.mean(axis=0)
        std = np.maximum(elites.std(axis=0), cem.min_std)

    env = DasmrEnv(env_config, params)
    episode = run_episode(
        env, OpenLoopPolicy(best_actions), goal=goal, max_steps=cem.horizon
    )
    reward_col = COLUMNS.index("reward")
    return PlanResult(
        actions=best_actions,
        final_distance=episode.header["final_distance"],
        cumulative_reward=float(sum(row[reward_col] for row in episode.rows)),
        reached=episode.header["outcome"] == "success",
        steps=episode.header["steps"],
        episode=episode,
        best_objective_history=history,
    )


def scripted_three_point(
    params: RobotParams,
    dt: float,
    segment_steps=(55, 55, 55),
    pause_steps: int = 25,
    spin: float = 0.8,
    steer: float = 1.0,
):
    """Open-loop forward-arc / reverse-arc / forward-arc maneuver.

    The classic direction-reversing turn: all three arcs rotate the chassis
    the same way (reversing with mirrored steering keeps the yaw rate sign).
    Pauses of zero spin between segments let the rate-limited actuators swing
    through the reversals. Returns an (N, 2) normalized action array; empty
    segments produce no motion.
    """
    if any(n < 0 for n in segment_steps) or pause_steps < 0:
        raise ValueError("segment and pause step counts must be >= 0")
    chunks = []
    signs = ((1.0, 1.0), (-1.0, -1.0), (1.0, 1.0))
    for (spin_sign, steer_sign), steps in zip(signs, segment_steps):
        if steps == 0:
            continue
        chunks.append(
            np.tile((spin * spin_sign, steer * steer_sign), (steps, 1))
        )
        if pause_steps:
            chunks.append(np.tile((0.0, steer * steer_sign), (pause_steps, 1)))
    if not chunks:
        return np.zeros((0, 2))
    return np.vstack(chunks)


@dataclass(frozen=True)
class ProbeEntry:
    """Cumulative reward of one spec along a trajectory.

    `normalized` divides every step reward by the magnitude of that spec's
    reward at the trajectory start, making shapes of different scales
    comparable; `cumulative` is the raw sum.
    """

    spec: RewardSpec
    cumulative: float
    normalized: float


def episode_displacements(episode: Episode):
    """Body-frame goal displacements along an episode, start point included."""
    gx, gy = episode.header["goal"]
    col = {name: i for i, name in enumerate(COLUMNS)}
    points = [(gx, gy)]
    for row in episode.rows:
        x = row[col["x_c"]]
        y = row[col["y_c"]]
        theta = row[col["theta_c"]]
        dx_w = gx - x
        dy_w = gy - y
        cos_t = math.cos(theta)
        sin_t = math.sin(theta)
        points.append(
            (cos_t * dx_w + sin_t * dy_w, -sin_t * dx_w + cos_t * dy_w)
        )
    return points


def reward_ordering_probe(displacements, specs):
    """Evaluate reward specs along one displacement sequence.

    Returns a ProbeEntry per spec, preserving order. Raw cumulative sums are
    not comparable across shapes of different magnitude (a steeper shape sums
    more negative on every trajectory), so the normalized sums are the ones
    to rank maneuver-friendliness by.
    """
    displacements = list(displacements)
    if not displacements:
        raise ValueError("probe requires a non-empty displacement sequence")
    entries = []
    for spec in specs:
        rewards = [float(evaluate(spec, dx, dy)) for dx, dy in displacements]
        cumulative = sum(rewards)
        scale = abs(rewards[0])
        normalized = cumulative / scale if scale > 0.0 else cumulative
        entries.append(
            ProbeEntry(spec=spec, cumulative=cumulative, normalized=normalized)
        )
    return entries
