"""Episode traces: a JSON record of every transition of one episode.

Schema (milpgym-trace-v1):

    {
      "schema": "milpgym-trace-v1",
      "instance": "<label or path>",
      "env": "branching" | "configuring",
      "policy": "<policy name>",
      "policy_seed": 0,
      "params": { ...solver parameters... },
      "reward": "<canonical reward text>",
      "observation": "nothing" | "bipartite" | "candidates",
      "steps": [
        {"t": 0, "action": null, "action_set": [...], "reward": r,
         "done": false, "info": {...}},
        {"t": 1, "action": 7, "action_set": [...], "reward": r, ...}
      ],
      "observations": [...]           // only with include_observations
      "summary": {"steps": n, "total_reward": x,
                  "nodes_processed": n, "termination_reason": "..."}
    }

Row t=0 is the reset transition (no action). Each later row records the
action taken and the StepResult it produced. Non-finite floats are encoded
as the strings "inf", "-inf", "nan" because strict JSON has no spelling
for them; readers convert back. Replaying a trace's action sequence on a
fresh environment must reproduce rewards and info bit for bit.
"""

import json

import numpy as np

from .features import (
    CANDIDATE_COLUMNS,
    CONSTRAINT_COLUMNS,
    VARIABLE_COLUMNS,
    BipartiteObservation,
    CandidateObservation,
)

SCHEMA = "milpgym-trace-v1"


def encode_float(value):
    if value is None:
        return None
    value = float(value)
    if value != value:
        return "nan"
    if value == float("inf"):
        return "inf"
    if value == float("-inf"):
        return "-inf"
    return value


def decode_float(value):
    if value is None:
        return None
    if isinstance(value, str):
        return float(value)
    return float(value)


def _encode_info(info):
    out = dict(info)
    out["dual_bound"] = encode_float(info["dual_bound"])
    out["incumbent_objective"] = encode_float(info["incumbent_objective"])
    return out


def _decode_info(info):
    out = dict(info)
    out["dual_bound"] = decode_float(info["dual_bound"])
    out["incumbent_objective"] = decode_float(info["incumbent_objective"])
    return out


def _matrix(array, columns=None):
    arr = np.asarray(array)
    entry = {
        "shape": list(arr.shape),
        "data": arr.reshape(-1).tolist(),  # row-major
    }
    if columns is not None:
        entry["columns"] = list(columns)
    return entry


def encode_observation(obs):
    if obs is None:
        return None
    if isinstance(obs, BipartiteObservation):
        return {
            "kind": "bipartite",
            "variable_features": _matrix(obs.variable_features, VARIABLE_COLUMNS),
            "constraint_features": _matrix(obs.constraint_features, CONSTRAINT_COLUMNS),
            "edge_index": _matrix(obs.edge_index),
            "edge_values": _matrix(obs.edge_values),
        }
    if isinstance(obs, CandidateObservation):
        return {
            "kind": "candidates",
            "features": _matrix(obs.features, CANDIDATE_COLUMNS),
            "candidates": _matrix(obs.candidates),
        }
    raise TypeError(f"cannot serialize observation of type {type(obs).__name__}")


def run_episode(
    env,
    instance,
    policy,
    policy_name,
    rng=None,
    instance_label=None,
    include_observations=False,
    max_steps=None,
):
    """Roll one episode and return the trace dict.

    ``policy(action_set, observation, rng)`` picks each action. For the
    configuring environment the policy is called once with the parameter
    schema as the action set and must return a parameter mapping.
    """
    from .engine import params_to_dict  # local import to avoid a cycle at import time

    result = env.reset(instance)
    steps = [
        {
            "t": 0,
            "action": None,
            "action_set": result.action_set,
            "reward": encode_float(result.reward),
            "done": result.done,
            "info": _encode_info(result.info),
        }
    ]
    observations = [encode_observation(result.observation)]
    t = 0
    while not result.done and (max_steps is None or t < max_steps):
        action = policy(result.action_set, result.observation, rng)
        if isinstance(action, (np.integer,)):
            action = int(action)
        result = env.step(action)
        t += 1
        steps.append(
            {
                "t": t,
                "action": action,
                "action_set": result.action_set,
                "reward": encode_float(result.reward),
                "done": result.done,
                "info": _encode_info(result.info),
            }
        )
        observations.append(encode_observation(result.observation))

    state = env.state
    trace = {
        "schema": SCHEMA,
        "instance": instance_label if instance_label is not None else getattr(instance, "name", str(instance)),
        "env": "configuring" if type(env).__name__ == "Configuring" else "branching",
        "policy": policy_name,
        "policy_seed": None,
        "params": params_to_dict(state.params),
        "reward": env.reward_function.to_text(),
        "observation": _obs_name(env.observation_function),
        "steps": steps,
        "summary": {
            "steps": t,
            "total_reward": encode_float(sum(decode_float(s["reward"]) for s in steps)),
            "nodes_processed": state.nodes_processed,
            "total_lp_iterations": state.total_lp_iterations,
            "termination_reason": state.termination_reason.value if state.is_done else None,
        },
    }
    if include_observations:
        trace["observations"] = observations
    return trace


def _obs_name(obs_fn):
    from .features import BipartiteFunction, CandidateFunction, NothingFunction

    if isinstance(obs_fn, BipartiteFunction):
        return "bipartite"
    if isinstance(obs_fn, CandidateFunction):
        return "candidates"
    if isinstance(obs_fn, NothingFunction):
        return "nothing"
    return type(obs_fn).__name__


def replay_trace(trace, instance, env_factory=None):
    """Re-run a trace's action sequence and compare every transition.

    Returns {"ok": bool, "mismatches": [...]} where each mismatch names the
    step and field that differed. Rewards and info must match bit for bit.
    """
    from . import engine
    from .envs import Branching, Configuring
    from .features import make_observation_function
    from .rewards import parse_reward

    if env_factory is None:
        params = engine.merge_params(None, trace["params"])
        cls = Configuring if trace["env"] == "configuring" else Branching
        env = cls(
            observation_function=make_observation_function(trace["observation"]),
            reward_function=parse_reward(trace["reward"]),
            params=params,
        )
    else:
        env = env_factory()

    mismatches = []

    def compare(t, field, got, want):
        if isinstance(want, float) or isinstance(got, float):
            got_f = decode_float(got) if got is not None else None
            want_f = decode_float(want) if want is not None else None
            same = (got_f == want_f) or (
                got_f is not None and want_f is not None and got_f != got_f and want_f != want_f
            )
        else:
            same = got == want
        if not same:
            mismatches.append({"t": t, "field": field, "got": got, "want": want})

    result = env.reset(instance)
    recorded = trace["steps"][0]
    compare(0, "reward", encode_float(result.reward), recorded["reward"])
    compare(0, "done", result.done, recorded["done"])
    compare(0, "action_set", result.action_set, recorded["action_set"])
    _compare_info(compare, 0, result.info, recorded["info"])

    for recorded in trace["steps"][1:]:
        result = env.step(recorded["action"])
        t = recorded["t"]
        compare(t, "reward", encode_float(result.reward), recorded["reward"])
        compare(t, "done", result.done, recorded["done"])
        compare(t, "action_set", result.action_set, recorded["action_set"])
        _compare_info(compare, t, result.info, recorded["info"])

    return {"ok": not mismatches, "mismatches": mismatches}


def _compare_info(compare, t, got, want):
    got = _encode_info(got)
    for key, want_value in want.items():
        compare(t, f"info.{key}", got.get(key), want_value)


def write_trace(trace, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(trace, fh, indent=1, allow_nan=False)
        fh.write("\n")


def read_trace(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
