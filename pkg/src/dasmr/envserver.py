"""Line-delimited JSON environment server over stdin/stdout.

This is the machine-facing counterpart of the Python API, intended for
foreign-language consumers (e.g. training frameworks in another runtime).
One process serves exactly one environment instance.

Protocol: one JSON object per line in, one per line out.

    {"op": "make", "config": {...}}          -> {"ok": true, "observation_dim": 14,
                                                 "action_low": [...], "action_high": [...],
                                                 "observation_low": [...], "observation_high": [...],
                                                 "observation_names": [...], "config": {...}}
    {"op": "reset", "seed": 10, "goal": [x, y]}  (seed/goal optional)
                                             -> {"ok": true, "observation": [...14...],
                                                 "goal": [x, y], "info": {...}}
    {"op": "step", "action": [a, b]}         -> {"ok": true, "observation": [...14...],
                                                 "reward": r, "terminated": b, "truncated": b,
                                                 "info": {"distance": d, "step": i}}
    {"op": "close"}                          -> {"ok": true} and the process exits.

Errors return {"ok": false, "error": msg, "type": exception-class-name}; the
instance stays usable. Numbers are serialized with shortest round-trip
decimal, so values cross the boundary bit-exactly.
"""

import json
import sys

from .configio import dump_config, parse_config_dict
from .environment import DasmrEnv


def _space_payload(env: DasmrEnv) -> dict:
    action = env.action_space()
    obs = env.observation_space()
    return {
        "observation_dim": len(obs.names),
        "action_low": action.low.tolist(),
        "action_high": action.high.tolist(),
        "observation_low": obs.low.tolist(),
        "observation_high": obs.high.tolist(),
        "observation_names": list(obs.names),
    }


def _handle(request: dict, env_box: list):
    op = request.get("op")
    if op == "make":
        params, config = parse_config_dict(request.get("config", {}))
        env_box[0] = DasmrEnv(config, params)
        payload = _space_payload(env_box[0])
        payload["config"] = json.loads(dump_config(params, config))
        return payload
    env = env_box[0]
    if env is None:
        raise RuntimeError("no environment; send a 'make' request first")
    if op == "reset":
        obs, goal = env.reset(
            seed=request.get("seed"), goal=request.get("goal")
        )
        return {
            "observation": obs.to_array().tolist(),
            "goal": [goal[0], goal[1]],
            "info": {},
        }
    if op == "step":
        if "action" not in request:
            raise ValueError("step request requires an 'action' field")
        result = env.step(request["action"])
        info = {
            "distance": result.info["distance"],
            "step": result.info["step"],
        }
        return {
            "observation": result.observation.to_array().tolist(),
            "reward": result.reward,
            "terminated": result.terminated,
            "truncated": result.truncated,
            "info": info,
        }
    if op == "spaces":
        return _space_payload(env)
    raise ValueError(f"unknown op {op!r}")


def serve(stdin=None, stdout=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    env_box = [None]
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            response = {"ok": False, "error": f"malformed JSON: {exc}",
                        "type": "ValueError"}
            print(json.dumps(response), file=stdout, flush=True)
            continue
        if request.get("op") == "close":
            print(json.dumps({"ok": True}), file=stdout, flush=True)
            return 0
        try:
            payload = _handle(request, env_box)
            payload["ok"] = True
            response = payload
        except (ValueError, RuntimeError, TypeError, KeyError) as exc:
            response = {
                "ok": False,
                "error": str(exc),
                "type": type(exc).__name__,
            }
        print(json.dumps(response), file=stdout, flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(serve())
