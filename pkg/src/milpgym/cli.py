"""Command-line interface.

Subcommands:
  generate        write seeded instance files plus a checksum manifest
  rollout         run episodes over instance files, optionally writing traces
  bench-overhead  compare env-driven search against the bare engine
  bench-features  time observation extraction, with and without caching
  env-server      speak the line-delimited JSON protocol on stdin/stdout

Exit codes: 0 success, 2 usage error (argparse), 1 runtime error.
"""

import argparse
import hashlib
import inspect
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import engine, instgen
from .envs import Branching, Configuring
from .errors import MilpGymError
from .features import make_observation_function
from .lpfile import read_lp_file, write_lp_text
from .policies import POLICIES, make_rng
from .rewards import parse_reward
from .trace import run_episode, write_trace

_PROFILES = {
    "small": {
        "set_cover": dict(rows=60, cols=120, density=0.06, max_cost=100),
        "comb_auction": dict(items=30, bids=120, add_prob=0.06),
        "cap_facility": dict(customers=12, facilities=12, ratio=3.0),
        "indep_set": dict(n_nodes=40, edge_prob=0.12),
    },
    "full": {
        "set_cover": dict(rows=500, cols=1000, density=0.05, max_cost=100),
        "comb_auction": dict(items=100, bids=500),
        "cap_facility": dict(customers=100, facilities=100, ratio=5.0),
        "indep_set": dict(n_nodes=100, edge_prob=0.1),
    },
}

_ALL_FAMILIES = ("set_cover", "comb_auction", "cap_facility", "indep_set")


def _parse_param(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def _solver_params(args):
    updates = {}
    if args.node_limit is not None:
        updates["node_limit"] = args.node_limit
    if args.time_limit is not None:
        updates["time_limit"] = args.time_limit
    if args.gap_tol is not None:
        updates["gap_tol"] = args.gap_tol
    if args.node_selection is not None:
        updates["node_selection"] = args.node_selection
    if args.internal_branching is not None:
        updates["internal_branching"] = args.internal_branching
    if args.solver_seed is not None:
        updates["seed"] = args.solver_seed
    return engine.merge_params(None, updates)


def _add_solver_flags(sub):
    sub.add_argument("--node-limit", type=int, default=None)
    sub.add_argument("--time-limit", type=float, default=None)
    sub.add_argument("--gap-tol", type=float, default=None)
    sub.add_argument("--node-selection", choices=[s.value for s in engine.NodeSelection], default=None)
    sub.add_argument(
        "--internal-branching", choices=[r.value for r in engine.BranchRule], default=None
    )
    sub.add_argument("--solver-seed", type=int, default=None)


def cmd_generate(args):
    params = dict(args.param or [])
    fn = instgen.FAMILIES.get(args.family)
    if fn is None:
        raise MilpGymError(f"unknown family {args.family!r}")
    defaults = {
        k: v.default
        for k, v in inspect.signature(fn).parameters.items()
        if k not in ("seed", "index")
    }
    resolved = dict(defaults)
    resolved.update(params)

    os.makedirs(args.out, exist_ok=True)
    files = []
    for k in range(args.count):
        problem = instgen.generate(args.family, seed=args.seed, index=k, **params)
        name = f"{args.family}_{args.seed}_{k}.lp"
        path = os.path.join(args.out, name)
        text = write_lp_text(problem)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        files.append({"name": name, "index": k, "sha256": digest})
        print(f"{name}  vars={problem.num_vars} rows={problem.num_cons} sha256={digest[:12]}")

    manifest = {
        "family": args.family,
        "seed": args.seed,
        "count": args.count,
        "params": resolved,
        "files": files,
    }
    with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=1)
        fh.write("\n")
    return 0


def _expand_instances(paths):
    out = []
    for p in paths:
        if os.path.isdir(p):
            out.extend(sorted(os.path.join(p, f) for f in os.listdir(p) if f.endswith(".lp")))
        else:
            out.append(p)
    return out


def _rollout_one(cfg, path):
    problem = read_lp_file(path)
    params = engine.merge_params(None, cfg["params"])
    obs_fn = make_observation_function(cfg["obs"], cache=cfg["obs_cache"])
    reward = parse_reward(cfg["reward"])
    if cfg["env"] == "configuring":
        env = Configuring(observation_function=obs_fn, reward_function=reward, params=params)
        policy_name = "set_params"

        def policy(action_set, observation, rng):
            return dict(cfg["set_params"])

    else:
        env = Branching(observation_function=obs_fn, reward_function=reward, params=params)
        policy = POLICIES[cfg["policy"]]
        policy_name = cfg["policy"]
    rng = make_rng(cfg["seed"])
    trace = run_episode(
        env,
        problem,
        policy,
        policy_name,
        rng=rng,
        instance_label=os.path.basename(path),
        include_observations=cfg["include_observations"],
        max_steps=cfg["max_steps"],
    )
    trace["policy_seed"] = cfg["seed"]
    if cfg["trace_dir"]:
        stem = os.path.splitext(os.path.basename(path))[0]
        write_trace(trace, os.path.join(cfg["trace_dir"], stem + ".trace.json"))
    return {
        "instance": trace["instance"],
        "steps": trace["summary"]["steps"],
        "total_reward": trace["summary"]["total_reward"],
        "nodes_processed": trace["summary"]["nodes_processed"],
        "total_lp_iterations": trace["summary"]["total_lp_iterations"],
        "termination_reason": trace["summary"]["termination_reason"],
    }


def cmd_rollout(args):
    instances = _expand_instances(args.instances)
    if not instances:
        raise MilpGymError("no instance files found")
    if args.env == "configuring" and args.policy != "first_candidate":
        raise MilpGymError("--policy applies to the branching env; configuring takes --set pairs")
    if args.policy == "most_fractional" and args.obs != "candidates":
        raise MilpGymError("most_fractional needs --obs candidates")
    if args.trace_dir:
        os.makedirs(args.trace_dir, exist_ok=True)
    cfg = {
        "env": args.env,
        "policy": args.policy,
        "obs": args.obs,
        "obs_cache": args.obs_cache,
        "reward": args.reward,
        "seed": args.seed,
        "params": _params_dict(args),
        "set_params": dict(args.set or []),
        "trace_dir": args.trace_dir,
        "include_observations": args.include_observations,
        "max_steps": args.max_steps,
    }
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_rollout_one_star, [(cfg, p) for p in instances]))
    else:
        rows = [_rollout_one(cfg, p) for p in instances]

    for row in rows:
        print(
            f"{row['instance']}  steps={row['steps']} nodes={row['nodes_processed']} "
            f"reward={row['total_reward']} reason={row['termination_reason']}"
        )
    total_reward = sum(
        r["total_reward"] for r in rows if isinstance(r["total_reward"], (int, float))
    )
    print(f"episodes={len(rows)} total_reward={total_reward}")
    if args.trace_dir:
        with open(os.path.join(args.trace_dir, "summary.json"), "w", encoding="utf-8") as fh:
            json.dump({"episodes": rows}, fh, indent=1)
            fh.write("\n")
    return 0


def _params_dict(args):
    params = _solver_params(args)
    return engine.params_to_dict(params)


def _rollout_one_star(pair):
    return _rollout_one(*pair)


def _bench_instances(args):
    families = args.families.split(",") if args.families else list(_ALL_FAMILIES)
    profile = _PROFILES[args.profile]
    for family in families:
        if family not in instgen.FAMILIES:
            raise MilpGymError(f"unknown family {family!r}")
        params = profile[family]
        for k in range(args.per_family):
            yield family, k, instgen.generate(family, seed=args.seed, index=k, **params)


def cmd_bench_overhead(args):
    from scipy import stats

    node_limit = args.node_limit
    rows = []
    for family, k, problem in _bench_instances(args):
        direct_params = engine.SolverParams(
            node_limit=node_limit, internal_branching=engine.BranchRule.FIRST_FRACTIONAL
        )
        env_params = engine.SolverParams(node_limit=node_limit)

        def run_direct():
            t0 = time.perf_counter()
            state = engine.run_to_completion(engine.start(problem, direct_params))
            return time.perf_counter() - t0, state

        def run_env():
            env = Branching(params=env_params)
            t0 = time.perf_counter()
            result = env.reset(problem)
            while not result.done:
                result = env.step(result.action_set[0])
            return time.perf_counter() - t0, env.state

        # alternate order so allocator warm-up noise cancels on average
        if k % 2 == 0:
            t_direct, s_direct = run_direct()
            t_env, s_env = run_env()
        else:
            t_env, s_env = run_env()
            t_direct, s_direct = run_direct()

        rows.append(
            {
                "family": family,
                "index": k,
                "env_seconds": t_env,
                "direct_seconds": t_direct,
                "ratio": t_env / t_direct,
                "nodes_equal": s_env.nodes_processed == s_direct.nodes_processed,
                "objective_equal": s_env.incumbent_obj == s_direct.incumbent_obj,
                "nodes": s_direct.nodes_processed,
                "termination_reason": s_direct.termination_reason.value,
            }
        )
        print(
            f"{family}[{k}] env={t_env:.4f}s direct={t_direct:.4f}s "
            f"ratio={t_env / t_direct:.3f} nodes_equal={rows[-1]['nodes_equal']}"
        )

    ratios = np.array([r["ratio"] for r in rows])
    tstat, pvalue = stats.ttest_1samp(ratios, popmean=1.0)
    report = {
        "instances": rows,
        "mean_ratio": float(ratios.mean()),
        "std_ratio": float(ratios.std(ddof=1)) if len(ratios) > 1 else 0.0,
        "t_stat": float(tstat),
        "p_value": float(pvalue),
        "all_nodes_equal": all(r["nodes_equal"] for r in rows),
        "all_objectives_equal": all(r["objective_equal"] for r in rows),
        "node_limit": node_limit,
        "profile": args.profile,
    }
    print(
        f"mean_ratio={report['mean_ratio']:.4f} t={report['t_stat']:.3f} "
        f"p={report['p_value']:.3f} nodes_equal={report['all_nodes_equal']}"
    )
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=1)
            fh.write("\n")
    return 0


def cmd_bench_features(args):
    modes = ["off", "on"] if args.cache == "both" else [args.cache]
    extractors = {
        mode: make_observation_function(args.obs, cache=(mode == "on")) for mode in modes
    }
    report = {"observation": args.obs, "families": []}
    for family_spec in (args.families.split(",") if args.families else list(_ALL_FAMILIES)):
        timings = {mode: [] for mode in modes}
        count = 0
        for family, k, problem in _bench_instances_one(family_spec, args):
            env = Branching(params=engine.SolverParams(node_limit=args.node_limit))
            result = env.reset(problem)
            for fn in extractors.values():
                fn.before_reset(env.state)
            while not result.done:
                # alternate which mode goes first so neither always pays
                # the cost of touching freshly produced solver arrays
                order = modes if count % 2 == 0 else modes[::-1]
                for mode in order:
                    t0 = time.perf_counter()
                    obs = extractors[mode].extract(env.state, False)
                    timings[mode].append(time.perf_counter() - t0)
                    assert obs is not None
                count += 1
                result = env.step(result.action_set[0])
        row = {"family": family_spec, "decision_points": count}
        for mode in modes:
            arr = np.array(timings[mode]) if timings[mode] else np.zeros(1)
            row[f"cache_{mode}_mean_s"] = float(arr.mean())
            row[f"cache_{mode}_total_s"] = float(arr.sum())
        if len(modes) == 2 and timings["off"]:
            row["cached_over_uncached"] = row["cache_on_mean_s"] / row["cache_off_mean_s"]
        report["families"].append(row)
        print(row)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=1)
            fh.write("\n")
    return 0


def _bench_instances_one(family, args):
    params = _PROFILES[args.profile][family]
    for k in range(args.per_family):
        yield family, k, instgen.generate(family, seed=args.seed, index=k, **params)


def cmd_env_server(args):
    from .envserver import serve

    serve(sys.stdin, sys.stdout)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="milpgym",
        description="Controllable MILP branch-and-bound solver with decision environments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write seeded instances and a manifest")
    g.add_argument("--family", required=True, choices=sorted(instgen.FAMILIES))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out", required=True)
    g.add_argument("--param", action="append", type=_parse_param, metavar="KEY=VALUE")
    g.set_defaults(fn=cmd_generate)

    r = sub.add_parser("rollout", help="run episodes over instance files")
    r.add_argument("instances", nargs="+", help="LP files or directories of them")
    r.add_argument("--env", choices=["branching", "configuring"], default="branching")
    r.add_argument("--policy", choices=sorted(POLICIES), default="first_candidate")
    r.add_argument("--obs", choices=["nothing", "bipartite", "candidates"], default="nothing")
    r.add_argument("--obs-cache", action="store_true")
    r.add_argument("--reward", default="lp_iterations")
    r.add_argument("--seed", type=int, default=0, help="policy RNG seed")
    r.add_argument("--set", action="append", type=_parse_param, metavar="KEY=VALUE",
                   help="configuring action entries")
    r.add_argument("--trace-dir", default=None)
    r.add_argument("--include-observations", action="store_true")
    r.add_argument("--max-steps", type=int, default=None)
    r.add_argument("--jobs", type=int, default=1)
    _add_solver_flags(r)
    r.set_defaults(fn=cmd_rollout)

    bo = sub.add_parser("bench-overhead", help="env loop vs bare engine timing")
    bo.add_argument("--families", default=None, help="comma list, default all four")
    bo.add_argument("--per-family", type=int, default=13)
    bo.add_argument("--seed", type=int, default=0)
    bo.add_argument("--node-limit", type=int, default=100)
    bo.add_argument("--profile", choices=sorted(_PROFILES), default="small")
    bo.add_argument("--report", default=None)
    bo.set_defaults(fn=cmd_bench_overhead)

    bf = sub.add_parser("bench-features", help="observation extraction timing")
    bf.add_argument("--families", default=None)
    bf.add_argument("--per-family", type=int, default=3)
    bf.add_argument("--seed", type=int, default=0)
    bf.add_argument("--node-limit", type=int, default=50)
    bf.add_argument("--obs", choices=["bipartite", "candidates"], default="bipartite")
    bf.add_argument("--cache", choices=["on", "off", "both"], default="both")
    bf.add_argument("--profile", choices=sorted(_PROFILES), default="small")
    bf.add_argument("--report", default=None)
    bf.set_defaults(fn=cmd_bench_features)

    s = sub.add_parser("env-server", help="line-delimited JSON environment protocol")
    s.set_defaults(fn=cmd_env_server)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args) or 0
    except MilpGymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
