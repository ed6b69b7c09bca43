"""Episode recording and the on-disk trajectory format.

A trajectory file is a CSV with a single leading comment line holding a JSON
header (config snapshot, seed, goal, outcome). Floats are written with 17
significant digits so a stored file replays bit-exactly; `replay_rows`
re-simulates the stored actions and reports the worst pose deviation.
"""

import csv
import io
import json
import math
from dataclasses import dataclass

from .configio import env_config_to_dict, robot_params_to_dict, parse_config_dict
from .environment import DasmrEnv
from .metrics import (
    OUTCOME_SUCCESS,
    OUTCOME_TRUNCATED_BOUNDS,
    OUTCOME_TRUNCATED_TIME,
    EpisodeRecord,
)
from .simulator import Pose

HEADER_PREFIX = "# "
FORMAT_NAME = "dasmr-trajectory"

COLUMNS = (
    "step",
    "time",
    "x_c",
    "y_c",
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
    "a_omega",
    "a_phi",
    "reward",
    "terminated",
    "truncated",
)

_INT_COLUMNS = {"step", "terminated", "truncated"}


@dataclass
class Episode:
    """One rolled-out episode: header metadata plus per-step rows."""

    header: dict
    rows: list

    @property
    def record(self) -> EpisodeRecord:
        h = self.header
        return EpisodeRecord(
            goal=tuple(h["goal"]),
            start_pose=Pose(),
            outcome=h["outcome"],
            final_distance=h["final_distance"],
            path_length=h["path_length"],
            steps=h["steps"],
        )


def run_episode(env: DasmrEnv, policy, goal=None, max_steps=None) -> Episode:
    """Roll one episode with `policy` (observation -> action pair).

    Stops on termination, truncation, or after `max_steps` actions (the
    latter is recorded as a time truncation). Rows follow COLUMNS.
    """
    obs, goal = env.reset(goal=goal)
    dt = env.config.dt
    rows = []
    outcome = OUTCOME_TRUNCATED_TIME
    final_distance = math.hypot(goal[0], goal[1])
    path_length = 0.0
    steps = 0
    while max_steps is None or steps < max_steps:
        action = policy(obs)
        result = env.step(action)
        obs = result.observation
        steps = result.info["step"]
        final_distance = result.info["distance"]
        path_length = result.info["path_length"]
        a_omega, a_phi = result.info["action"]
        rows.append(
            (
                steps,
                steps * dt,
                obs.x_c,
                obs.y_c,
                obs.theta_c,
                obs.omega_l,
                obs.omega_r,
                obs.phi_l,
                obs.phi_r,
                obs.phi_dot_l,
                obs.phi_dot_r,
                obs.v_x,
                obs.v_y,
                obs.theta_dot,
                a_omega,
                a_phi,
                result.reward,
                int(result.terminated),
                int(result.truncated),
            )
        )
        if result.terminated:
            outcome = OUTCOME_SUCCESS
            break
        if result.truncated:
            outcome = (
                OUTCOME_TRUNCATED_BOUNDS
                if result.info.get("truncation_reason") == "bounds"
                else OUTCOME_TRUNCATED_TIME
            )
            break
    header = {
        "format": FORMAT_NAME,
        "version": 1,
        "robot": robot_params_to_dict(env.params),
        "env": env_config_to_dict(env.config),
        "goal": [goal[0], goal[1]],
        "outcome": outcome,
        "final_distance": final_distance,
        "path_length": path_length,
        "steps": steps,
    }
    return Episode(header=header, rows=rows)


def format_float(value) -> str:
    return "%.17g" % float(value)


def write_trajectory(path, episode: Episode) -> None:
    with open(path, "w", newline="") as handle:
        handle.write(HEADER_PREFIX + json.dumps(episode.header) + "\n")
        writer = csv.writer(handle)
        writer.writerow(COLUMNS)
        for row in episode.rows:
            writer.writerow(
                [
                    str(int(v)) if name in _INT_COLUMNS else format_float(v)
                    for name, v in zip(COLUMNS, row)
                ]
            )


def read_trajectory(path) -> Episode:
    with open(path, "r", newline="") as handle:
        first = handle.readline()
        if not first.startswith(HEADER_PREFIX):
            raise ValueError(f"{path}: missing JSON header line")
        try:
            header = json.loads(first[len(HEADER_PREFIX):])
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: malformed JSON header: {exc}") from exc
        if header.get("format") != FORMAT_NAME:
            raise ValueError(f"{path}: not a {FORMAT_NAME} file")
        reader = csv.reader(io.StringIO(handle.read()))
        names = next(reader, None)
        if names is None or tuple(names) != COLUMNS:
            raise ValueError(f"{path}: unexpected column header")
        rows = []
        for raw in reader:
            if not raw:
                continue
            if len(raw) != len(COLUMNS):
                raise ValueError(f"{path}: row with {len(raw)} fields")
            rows.append(
                tuple(
                    int(v) if name in _INT_COLUMNS else float(v)
                    for name, v in zip(COLUMNS, raw)
                )
            )
    return Episode(header=header, rows=rows)


def replay_rows(episode: Episode) -> float:
    """Re-simulate the stored actions; return the max pose deviation (m/rad).

    The header's config snapshot and goal fully determine the episode, so a
    faithful store round-trips to deviation 0 up to decimal serialization.
    """
    params, config = parse_config_dict(
        {"robot": episode.header["robot"], "env": episode.header["env"]}
    )
    env = DasmrEnv(config, params)
    env.reset(goal=episode.header["goal"])
    col = {name: i for i, name in enumerate(COLUMNS)}
    worst = 0.0
    for row in episode.rows:
        result = env.step((row[col["a_omega"]], row[col["a_phi"]]))
        obs = result.observation
        worst = max(
            worst,
            abs(obs.x_c - row[col["x_c"]]),
            abs(obs.y_c - row[col["y_c"]]),
            abs(obs.theta_c - row[col["theta_c"]]),
        )
    return worst
