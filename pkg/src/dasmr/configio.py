"""Config file loading: a JSON document with "robot" and "env" sections.

Schema (all keys optional; omitted keys take the built-in defaults):

    {
      "robot": {"wheelbase_L": 0.3, "track_W": 0.5, "wheel_radius": 0.13,
                "max_wheel_spin": 7.7, "max_steer_angle": 0.436,
                "max_steer_rate": 1.0, "max_wheel_spin_accel": 5.0},
      "env":   {"workspace_half_extent": 4.0, "goal_half_extent": 2.0,
                "d_th": 0.15, "max_episode_steps": 800, "dt": 0.025,
                "seed": 9527, "continuous_goals": false,
                "reset_robot_pose": [0.0, 0.0, 0.0],
                "reward": {"kind": "hs", "c": 2.0, "d_th": 0.15}}
    }

Unknown keys raise a ValueError naming the offending field.
"""

import dataclasses
import json

from .environment import EnvConfig
from .kinematics import RobotParams
from .rewards import RewardSpec
from .simulator import Pose


def robot_params_to_dict(params: RobotParams) -> dict:
    return dataclasses.asdict(params)


def env_config_to_dict(config: EnvConfig) -> dict:
    out = dataclasses.asdict(config)
    pose = config.reset_robot_pose
    out["reset_robot_pose"] = [pose.x, pose.y, pose.theta]
    out["reward"] = dataclasses.asdict(config.reward)
    return out


def _build(cls, section: str, data: dict, convert=None):
    if not isinstance(data, dict):
        raise ValueError(f"config section {section!r} must be an object")
    known = {f.name for f in dataclasses.fields(cls)}
    for key in data:
        if key not in known:
            raise ValueError(f"unknown field {key!r} in config section {section!r}")
    kwargs = dict(data)
    if convert:
        convert(kwargs)
    return cls(**kwargs)


def parse_config_dict(doc: dict):
    """Build (RobotParams, EnvConfig) from a parsed config document."""
    if not isinstance(doc, dict):
        raise ValueError("config document must be a JSON object")
    for key in doc:
        if key not in ("robot", "env"):
            raise ValueError(f"unknown top-level config section {key!r}")
    params = _build(RobotParams, "robot", doc.get("robot", {}))

    def convert_env(kwargs):
        if "reward" in kwargs:
            reward = kwargs["reward"]
            kwargs["reward"] = _build(RewardSpec, "env.reward", reward)
        if "reset_robot_pose" in kwargs:
            pose = kwargs["reset_robot_pose"]
            if not (isinstance(pose, (list, tuple)) and len(pose) == 3):
                raise ValueError(
                    "env.reset_robot_pose must be a [x, y, theta] triple"
                )
            kwargs["reset_robot_pose"] = Pose(*(float(v) for v in pose))

    config = _build(EnvConfig, "env", doc.get("env", {}), convert_env)
    return params, config


def load_config(path):
    """Load (RobotParams, EnvConfig) from a JSON config file."""
    with open(path, "r") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: malformed JSON: {exc}") from exc
    return parse_config_dict(doc)


def dump_config(params: RobotParams, config: EnvConfig) -> str:
    """Serialize a config pair back to its JSON document form."""
    return json.dumps(
        {"robot": robot_params_to_dict(params), "env": env_config_to_dict(config)},
        indent=2,
    )
