"""Shared builders for the test suite."""

import numpy as np

from milpgym.problem import Constraint, Problem, Relation


def build_problem(objective, rows, lower=None, upper=None, integer=None,
                  name="prob", maximize=False):
    objective = np.asarray(objective, dtype=float)
    n = objective.size
    lower = np.zeros(n) if lower is None else np.asarray(lower, dtype=float)
    upper = np.ones(n) if upper is None else np.asarray(upper, dtype=float)
    if integer is None or isinstance(integer, bool):
        is_integer = np.full(n, True if integer is None else integer)
    else:
        is_integer = np.asarray(integer, dtype=bool)
    cons = [
        Constraint(
            indices=np.asarray(indices, dtype=np.int64),
            coefs=np.asarray(coefs, dtype=float),
            relation=rel,
            rhs=float(rhs),
        )
        for indices, coefs, rel, rhs in rows
    ]
    return Problem(
        name=name,
        objective=objective,
        lower=lower,
        upper=upper,
        is_integer=is_integer,
        rows=cons,
        maximize=maximize,
    )


def tiny_knapsack():
    # min -5x - 4y subject to 6x + 4y <= 9, both binary.
    # The relaxation optimum sits at (5/6, 1) with objective -49/6;
    # the integer optimum is -5 at (1, 0).
    return build_problem([-5.0, -4.0], [((0, 1), (6.0, 4.0), Relation.LE, 9.0)])


def random_binary_milp(rng, max_vars=12, max_rows=10):
    n = int(rng.integers(2, max_vars + 1))
    m = int(rng.integers(1, max_rows + 1))
    obj = rng.integers(-10, 11, size=n).astype(float)
    rows = []
    for _ in range(m):
        k = int(rng.integers(1, n + 1))
        idx = np.sort(rng.choice(n, size=k, replace=False))
        coefs = rng.integers(-5, 6, size=k).astype(float)
        while not coefs.any():
            coefs = rng.integers(-5, 6, size=k).astype(float)
        # pick an rhs between the row's achievable extremes so single rows
        # stay satisfiable; joint infeasibility can still happen and both
        # sides under test must agree on it
        lo_val = int(coefs.clip(max=0).sum())
        hi_val = int(coefs.clip(min=0).sum())
        rel = (Relation.LE, Relation.GE, Relation.LE, Relation.GE, Relation.EQ)[
            int(rng.integers(0, 5))
        ]
        rhs = int(rng.integers(lo_val, hi_val + 1))
        rows.append((idx, coefs, rel, rhs))
    return build_problem(obj, rows, name=f"rand{n}x{m}")


def random_bounded_lp(rng, max_vars=6, max_rows=6):
    n = int(rng.integers(1, max_vars + 1))
    m = int(rng.integers(1, max_rows + 1))
    obj = rng.integers(-9, 10, size=n).astype(float)
    upper = rng.integers(1, 4, size=n).astype(float)
    rows = []
    for _ in range(m):
        k = int(rng.integers(1, n + 1))
        idx = np.sort(rng.choice(n, size=k, replace=False))
        coefs = rng.integers(-4, 5, size=k).astype(float)
        while not coefs.any():
            coefs = rng.integers(-4, 5, size=k).astype(float)
        lo_val = float((coefs.clip(max=0) * upper[idx]).sum())
        hi_val = float((coefs.clip(min=0) * upper[idx]).sum())
        rel = (Relation.LE, Relation.GE, Relation.LE, Relation.GE, Relation.EQ)[
            int(rng.integers(0, 5))
        ]
        rhs = float(rng.integers(int(np.floor(lo_val)), int(np.ceil(hi_val)) + 1))
        rows.append((idx, coefs, rel, rhs))
    return build_problem(obj, rows, upper=upper, integer=False, name=f"lp{n}x{m}")


def drive_episode(env, problem, pick):
    """Run one episode, choosing each action with pick(result)."""
    result = env.reset(problem)
    results = [result]
    actions = []
    while not result.done:
        action = pick(result)
        actions.append(action)
        result = env.step(action)
        results.append(result)
    return actions, results
