"""Command-line front end: rollouts, reward heatmaps, CEM planning and
metric reports over stored trajectory directories.

Exit codes: 0 success (`plan`: goal reached), 3 plan finished without
reaching the goal, 2 usage errors, 1 everything else.
"""

import argparse
import dataclasses
import json
import math
import os
import sys

from .configio import dump_config, load_config
from .environment import DasmrEnv, EnvConfig
from .kinematics import RobotParams
from .metrics import (
    OUTCOME_SUCCESS,
    OUTCOME_TRUNCATED_BOUNDS,
    OUTCOME_TRUNCATED_TIME,
    EpisodeRecord,
    build_report,
)
from .planner import (
    CemConfig,
    ForwardPolicy,
    RandomPolicy,
    ZeroPolicy,
    cem_plan,
    episode_displacements,
    reward_ordering_probe,
)
from .rewards import REWARD_KINDS, RewardSpec, reward_field
from .simulator import Pose
from .trajectory import COLUMNS, read_trajectory, run_episode, write_trajectory

CONFIG_ENV_VAR = "DASMR_CONFIG"

POLICIES = {
    "zero": ZeroPolicy,
    "forward": ForwardPolicy,
    "random": RandomPolicy,
}

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_REACHED = 3


def _load_base_config(args):
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV_VAR)
    if path:
        return load_config(path)
    return RobotParams(), EnvConfig()


def _apply_env_overrides(config: EnvConfig, args) -> EnvConfig:
    updates = {}
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if getattr(args, "dth", None) is not None:
        updates["d_th"] = args.dth
    if getattr(args, "max_steps", None) is not None:
        updates["max_episode_steps"] = args.max_steps
    if getattr(args, "continuous", False):
        updates["continuous_goals"] = True
    reward_updates = {}
    if getattr(args, "reward", None) is not None:
        reward_updates["kind"] = args.reward
    if getattr(args, "c", None) is not None:
        reward_updates["c"] = args.c
    if reward_updates or "d_th" in updates:
        base = config.reward
        reward_updates.setdefault("kind", base.kind)
        reward_updates.setdefault("c", base.c)
        reward_updates.setdefault("d_th", updates.get("d_th", config.d_th))
        updates["reward"] = RewardSpec(**reward_updates)
    if updates:
        config = dataclasses.replace(config, **updates)
    return config


def _reward_spec_from_args(args, default_dth=0.15) -> RewardSpec:
    return RewardSpec(
        kind=args.reward,
        c=args.c if args.c is not None else 2.0,
        d_th=args.dth if args.dth is not None else default_dth,
    )


def cmd_rollout(args) -> int:
    if args.episodes < 1:
        raise UsageError("--episodes must be >= 1")
    params, config = _load_base_config(args)
    config = _apply_env_overrides(config, args)
    policy_cls = POLICIES[args.policy]
    policy = policy_cls(config.seed) if args.policy == "random" else policy_cls()
    env = DasmrEnv(config, params)
    os.makedirs(args.out, exist_ok=True)
    records = []
    for index in range(args.episodes):
        episode = run_episode(env, policy)
        episode.header["episode"] = index
        episode.header["seed"] = config.seed
        write_trajectory(
            os.path.join(args.out, f"episode_{index:03d}.csv"), episode
        )
        records.append(episode.record)
    report = build_report(records)
    with open(os.path.join(args.out, "metrics.json"), "w") as handle:
        handle.write(report.to_json() + "\n")
    with open(os.path.join(args.out, "metrics.txt"), "w") as handle:
        handle.write(report.to_table() + "\n")
    print(report.to_table())
    return EXIT_OK


def cmd_heatmap(args) -> int:
    spec = _reward_spec_from_args(args)
    extent = args.extent
    xs, ys, grid = reward_field(
        spec, (-extent, extent), (-extent, extent), args.resolution
    )
    os.makedirs(args.out, exist_ok=True)
    name = args.name or spec.kind
    csv_path = os.path.join(args.out, f"{name}.csv")
    meta = {
        "reward": dataclasses.asdict(spec),
        "extent": extent,
        "resolution": args.resolution,
        "layout": "row-major, x fastest; row iy is y = ys[iy]",
    }
    with open(csv_path, "w") as handle:
        handle.write("# " + json.dumps(meta) + "\n")
        for iy in range(grid.shape[0]):
            handle.write(",".join("%.17g" % v for v in grid[iy]) + "\n")
    png_path = os.path.join(args.out, f"{name}.png")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    image = ax.imshow(
        grid,
        origin="lower",
        extent=(-extent, extent, -extent, extent),
        cmap="viridis",
    )
    ax.set_xlabel("goal x [m]")
    ax.set_ylabel("goal y [m]")
    ax.set_title(spec.label())
    fig.colorbar(image, ax=ax)
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    print(f"wrote {csv_path} and {png_path}")
    return EXIT_OK


def cmd_plan(args) -> int:
    params, config = _load_base_config(args)
    config = _apply_env_overrides(config, args)
    if config.max_episode_steps < args.horizon:
        config = dataclasses.replace(config, max_episode_steps=args.horizon)
    objective = config.reward
    cem = CemConfig(
        horizon=args.horizon,
        population=args.population,
        elite_fraction=args.elite_fraction,
        iterations=args.iterations,
        init_std=args.init_std,
        seed=config.seed,
    )
    result = cem_plan(config, tuple(args.goal), objective, cem, params)
    os.makedirs(args.out, exist_ok=True)
    write_trajectory(os.path.join(args.out, "plan.csv"), result.episode)
    probe_specs = [objective]
    if objective.kind != "euclid":
        probe_specs.append(RewardSpec("euclid", d_th=config.d_th))
    entries = reward_ordering_probe(
        episode_displacements(result.episode), probe_specs
    )
    summary = {
        "goal": list(args.goal),
        "reached": result.reached,
        "final_distance": result.final_distance,
        "steps": result.steps,
        "cumulative_reward": {
            e.spec.label(): e.cumulative for e in entries
        },
        "normalized_cumulative_reward": {
            e.spec.label(): e.normalized for e in entries
        },
    }
    with open(os.path.join(args.out, "plan.json"), "w") as handle:
        json.dump(summary, handle, indent=2)
        handle.write("\n")
    status = "reached" if result.reached else "NOT reached"
    print(
        f"goal ({args.goal[0]:g}, {args.goal[1]:g}) {status}: "
        f"final distance {result.final_distance:.3f} m in {result.steps} steps"
    )
    return EXIT_OK if result.reached else EXIT_NOT_REACHED


def _reevaluate(episode, d_th):
    """First-crossing re-evaluation of a stored episode at a new threshold."""
    gx, gy = episode.header["goal"]
    col = {name: i for i, name in enumerate(COLUMNS)}
    path_length = 0.0
    prev_x, prev_y = 0.0, 0.0
    for row in episode.rows:
        x, y = row[col["x_c"]], row[col["y_c"]]
        path_length += math.hypot(x - prev_x, y - prev_y)
        prev_x, prev_y = x, y
        distance = math.hypot(gx - x, gy - y)
        if distance < d_th:
            return EpisodeRecord(
                goal=(gx, gy),
                start_pose=Pose(),
                outcome=OUTCOME_SUCCESS,
                final_distance=distance,
                path_length=path_length,
                steps=row[col["step"]],
            )
    outcome = episode.header.get("outcome", OUTCOME_TRUNCATED_TIME)
    if outcome == OUTCOME_SUCCESS:
        # Succeeded at the stored threshold but not at this stricter one.
        outcome = OUTCOME_TRUNCATED_TIME
    if outcome not in (OUTCOME_TRUNCATED_TIME, OUTCOME_TRUNCATED_BOUNDS):
        outcome = OUTCOME_TRUNCATED_TIME
    last = episode.rows[-1] if episode.rows else None
    final_distance = (
        math.hypot(gx - last[col["x_c"]], gy - last[col["y_c"]])
        if last is not None
        else math.hypot(gx, gy)
    )
    return EpisodeRecord(
        goal=(gx, gy),
        start_pose=Pose(),
        outcome=outcome,
        final_distance=final_distance,
        path_length=path_length,
        steps=last[col["step"]] if last is not None else 0,
    )


def cmd_eval(args) -> int:
    names = sorted(
        n for n in os.listdir(args.dir) if n.endswith(".csv")
    )
    if not names:
        raise UsageError(f"no trajectory files (*.csv) in {args.dir}")
    records = []
    failures = 0
    for name in names:
        path = os.path.join(args.dir, name)
        try:
            episode = read_trajectory(path)
        except (ValueError, OSError) as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            failures += 1
            continue
        records.append(_reevaluate(episode, args.dth))
    if failures:
        return EXIT_ERROR
    report = build_report(records)
    print(report.to_table())
    print(report.to_json())
    return EXIT_OK


def cmd_config(args) -> int:
    params, config = _load_base_config(args)
    config = _apply_env_overrides(config, args)
    print(dump_config(params, config))
    return EXIT_OK


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dasmr",
        description="Double-Ackermann maneuvering simulator and evaluation tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument(
            "--config",
            help=f"JSON config path (or set ${CONFIG_ENV_VAR})",
        )
        p.add_argument("--seed", type=int, help="override env seed")
        p.add_argument("--dth", type=float, help="override success threshold [m]")
        p.add_argument(
            "--reward", choices=REWARD_KINDS, help="override reward kind"
        )
        p.add_argument("--c", type=float, help="reward weighting parameter")

    p_roll = sub.add_parser("rollout", help="run episodes and write trajectories")
    add_config(p_roll)
    p_roll.add_argument("--policy", choices=sorted(POLICIES), default="random")
    p_roll.add_argument("--episodes", type=int, default=20)
    p_roll.add_argument("--max-steps", type=int, dest="max_steps")
    p_roll.add_argument(
        "--continuous",
        action="store_true",
        help="carry the pose across episodes, resampling only the goal",
    )
    p_roll.add_argument("--out", required=True)
    p_roll.set_defaults(func=cmd_rollout)

    p_heat = sub.add_parser("heatmap", help="export a reward field grid + image")
    p_heat.add_argument("--reward", choices=REWARD_KINDS, required=True)
    p_heat.add_argument("--c", type=float)
    p_heat.add_argument("--dth", type=float)
    p_heat.add_argument("--extent", type=float, default=4.0)
    p_heat.add_argument("--resolution", type=int, default=201)
    p_heat.add_argument("--name", help="output basename (default: reward kind)")
    p_heat.add_argument("--out", required=True)
    p_heat.set_defaults(func=cmd_heatmap)

    p_plan = sub.add_parser("plan", help="CEM search for a goal-reaching plan")
    add_config(p_plan)
    p_plan.add_argument("--goal", type=float, nargs=2, required=True)
    p_plan.add_argument("--horizon", type=int, default=300)
    p_plan.add_argument("--population", type=int, default=128)
    p_plan.add_argument(
        "--elite-fraction", type=float, default=0.1, dest="elite_fraction"
    )
    p_plan.add_argument("--iterations", type=int, default=40)
    p_plan.add_argument("--init-std", type=float, default=0.5, dest="init_std")
    p_plan.add_argument("--out", required=True)
    p_plan.set_defaults(func=cmd_plan)

    p_eval = sub.add_parser("eval", help="recompute metrics from stored trajectories")
    p_eval.add_argument("--dir", required=True)
    p_eval.add_argument("--dth", type=float, default=0.15)
    p_eval.set_defaults(func=cmd_eval)

    p_cfg = sub.add_parser("config", help="print the resolved configuration")
    add_config(p_cfg)
    p_cfg.set_defaults(func=cmd_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
