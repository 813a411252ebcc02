"""Line-delimited JSON protocol for driving environments from another process.

One request per line on stdin, one response per line on stdout. Requests
carry an "id" that is echoed back, an "op", and op-specific fields:

  ping                                     -> "pong"
  parameter_schema                         -> list of parameter descriptors
  generate {family, seed, index, params}   -> {name, lp_text}
  new_env {env, observation, cache, reward, params} -> {env_id}
  reset {env_id, instance_path | instance_text}     -> step payload
  step {env_id, action}                             -> step payload
  close_env {env_id}                       -> {closed: true}
  shutdown                                 -> {stopping: true}, then exit

Responses are {"id", "ok": true, "result"} or
{"id", "ok": false, "error": {"type", "message"}}. Non-finite floats are
encoded as the strings "inf", "-inf", "nan" so the stream stays strict
JSON. Matrices travel as base64 of their little-endian row-major bytes,
float64 for features and int32 for index arrays, so the reader can view
the decoded buffer directly as a typed array.
"""

import base64
import json

import numpy as np

from . import engine, instgen
from .envs import Branching, Configuring
from .errors import MilpGymError
from .features import (
    CANDIDATE_COLUMNS,
    CONSTRAINT_COLUMNS,
    VARIABLE_COLUMNS,
    BipartiteObservation,
    CandidateObservation,
    make_observation_function,
)
from .lpfile import read_lp_file, read_lp_text, write_lp_text
from .rewards import parse_reward
from .trace import _encode_info, encode_float

PROTOCOL = "milpgym-envserver-v1"


class ProtocolError(MilpGymError):
    """Malformed request: bad JSON, unknown op, or missing field."""


def _b64_matrix(arr, columns=None):
    arr = np.asarray(arr)
    if arr.dtype.kind == "i":
        packed = np.ascontiguousarray(arr, dtype="<i4")
        dtype = "int32"
    else:
        packed = np.ascontiguousarray(arr, dtype="<f8")
        dtype = "float64"
    out = {
        "shape": list(arr.shape),
        "dtype": dtype,
        "order": "row_major",
        "b64": base64.b64encode(packed.tobytes()).decode("ascii"),
    }
    if columns is not None:
        out["columns"] = list(columns)
    return out


def _encode_observation(obs):
    if obs is None:
        return None
    if isinstance(obs, CandidateObservation):
        return {
            "kind": "candidates",
            "features": _b64_matrix(obs.features, CANDIDATE_COLUMNS),
            "candidates": [int(c) for c in obs.candidates],
        }
    if isinstance(obs, BipartiteObservation):
        return {
            "kind": "bipartite",
            "variable_features": _b64_matrix(obs.variable_features, VARIABLE_COLUMNS),
            "constraint_features": _b64_matrix(obs.constraint_features, CONSTRAINT_COLUMNS),
            "edge_index": _b64_matrix(obs.edge_index),
            "edge_values": _b64_matrix(obs.edge_values),
        }
    raise ProtocolError(f"cannot encode observation of type {type(obs).__name__}")


def _encode_step(result):
    action_set = result.action_set
    if action_set is not None and action_set and isinstance(action_set[0], (int, np.integer)):
        action_set = [int(a) for a in action_set]
    return {
        "observation": _encode_observation(result.observation),
        "action_set": action_set,
        "reward": encode_float(result.reward),
        "done": result.done,
        "info": _encode_info(result.info),
    }


class EnvServer:
    def __init__(self):
        self._envs = {}
        self._next_id = 1

    def _env(self, req):
        env_id = req.get("env_id")
        env = self._envs.get(env_id)
        if env is None:
            raise ProtocolError(f"no such env_id {env_id!r}")
        return env

    def handle(self, req):
        """Returns (result, stop_flag)."""
        op = req.get("op")
        if op == "ping":
            return {"pong": True, "protocol": PROTOCOL}, False
        if op == "parameter_schema":
            return [dict(entry) for entry in engine.PARAMETER_SCHEMA], False
        if op == "generate":
            for field in ("family", "seed"):
                if field not in req:
                    raise ProtocolError(f"generate needs {field!r}")
            problem = instgen.generate(
                req["family"],
                seed=req["seed"],
                index=req.get("index", 0),
                **req.get("params", {}),
            )
            return {"name": problem.name, "lp_text": write_lp_text(problem)}, False
        if op == "new_env":
            kind = req.get("env", "branching")
            obs = make_observation_function(
                req.get("observation", "nothing"), cache=bool(req.get("cache", False))
            )
            reward = parse_reward(req.get("reward", "lp_iterations"))
            params = engine.merge_params(None, req.get("params", {}))
            if kind == "branching":
                env = Branching(observation_function=obs, reward_function=reward, params=params)
            elif kind == "configuring":
                env = Configuring(observation_function=obs, reward_function=reward, params=params)
            else:
                raise ProtocolError(f"unknown env kind {kind!r}")
            env_id = self._next_id
            self._next_id += 1
            self._envs[env_id] = env
            return {"env_id": env_id}, False
        if op == "reset":
            env = self._env(req)
            if "instance_text" in req:
                problem = read_lp_text(req["instance_text"])
            elif "instance_path" in req:
                problem = read_lp_file(req["instance_path"])
            else:
                raise ProtocolError("reset needs instance_text or instance_path")
            return _encode_step(env.reset(problem)), False
        if op == "step":
            env = self._env(req)
            if "action" not in req:
                raise ProtocolError("step needs an action")
            return _encode_step(env.step(req["action"])), False
        if op == "close_env":
            env_id = req.get("env_id")
            if env_id not in self._envs:
                raise ProtocolError(f"no such env_id {env_id!r}")
            del self._envs[env_id]
            return {"closed": True}, False
        if op == "shutdown":
            return {"stopping": True}, True
        raise ProtocolError(f"unknown op {op!r}")

    def handle_line(self, line):
        req_id = None
        try:
            req = json.loads(line)
            if not isinstance(req, dict):
                raise ProtocolError("request must be a JSON object")
            req_id = req.get("id")
            result, stop = self.handle(req)
            return {"id": req_id, "ok": True, "result": result}, stop
        except Exception as exc:  # noqa: BLE001 - every failure must answer in-band
            error = {"type": type(exc).__name__, "message": str(exc)}
            return {"id": req_id, "ok": False, "error": error}, False


def serve(stdin, stdout):
    server = EnvServer()
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        response, stop = server.handle_line(line)
        stdout.write(json.dumps(response, allow_nan=False) + "\n")
        stdout.flush()
        if stop:
            break
