"""Independent oracles used to pin expected values in tests.

Nothing in here may import the simplex or engine modules: these checks have
to stay on a separate code path from the solver they judge. Continuous
subproblems inside the enumeration oracle are handed to scipy's HiGHS
wrapper, which shares no code with this package.
"""

import itertools

import numpy as np
from scipy.optimize import linprog

from milpgym.problem import Relation


def brute_force_milp(problem, feas_tol=1e-9):
    """Enumerate every integer assignment of a tiny MILP.

    Integer variables must have finite bounds. For each assignment the
    remaining continuous variables (if any) are optimized with scipy.
    Returns (objective, x) of the best feasible point, or (None, None)
    when the instance is infeasible.
    """
    n = problem.num_vars
    int_idx = np.nonzero(problem.is_integer)[0]
    cont_idx = np.nonzero(~problem.is_integer)[0]

    ranges = []
    for j in int_idx:
        lo = int(np.ceil(problem.lower[j] - feas_tol))
        hi = int(np.floor(problem.upper[j] + feas_tol))
        if hi < lo:
            return None, None
        ranges.append(range(lo, hi + 1))

    best_obj = None
    best_x = None
    for assign in itertools.product(*ranges):
        x = np.zeros(n)
        x[int_idx] = assign
        if cont_idx.size == 0:
            if not _point_feasible(problem, x, feas_tol):
                continue
            obj = float(np.dot(problem.objective, x))
        else:
            obj, x = _solve_continuous_rest(problem, x, int_idx, cont_idx)
            if obj is None:
                continue
        if best_obj is None or obj < best_obj:
            best_obj = obj
            best_x = x
    return best_obj, best_x


def _point_feasible(problem, x, tol):
    if np.any(x < problem.lower - tol) or np.any(x > problem.upper + tol):
        return False
    for row in problem.rows:
        lhs = float(np.dot(row.coefs, x[row.indices]))
        if row.relation is Relation.LE and lhs > row.rhs + tol:
            return False
        if row.relation is Relation.GE and lhs < row.rhs - tol:
            return False
        if row.relation is Relation.EQ and abs(lhs - row.rhs) > tol:
            return False
    return True


def _solve_continuous_rest(problem, x, int_idx, cont_idx):
    """Fix the integer part of x, optimize the continuous part with scipy."""
    pos = {j: k for k, j in enumerate(cont_idx)}
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for row in problem.rows:
        dense = np.zeros(cont_idx.size)
        fixed = 0.0
        for j, c in zip(row.indices, row.coefs):
            if j in pos:
                dense[pos[j]] = c
            else:
                fixed += c * x[j]
        rest = row.rhs - fixed
        if row.relation is Relation.LE:
            a_ub.append(dense)
            b_ub.append(rest)
        elif row.relation is Relation.GE:
            a_ub.append(-dense)
            b_ub.append(-rest)
        else:
            a_eq.append(dense)
            b_eq.append(rest)
    bounds = [(problem.lower[j], problem.upper[j]) for j in cont_idx]
    bounds = [(None if lo == -np.inf else lo, None if hi == np.inf else hi) for lo, hi in bounds]
    res = linprog(
        problem.objective[cont_idx],
        A_ub=np.array(a_ub) if a_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(a_eq) if a_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=bounds,
        method="highs",
    )
    if not res.success:
        return None, None
    out = x.copy()
    out[cont_idx] = res.x
    fixed_part = float(np.dot(problem.objective[int_idx], x[int_idx]))
    return fixed_part + res.fun, out


def vertex_enum_lp(problem, feas_tol=1e-7):
    """Solve a small box-bounded LP by enumerating candidate vertices.

    Every variable needs finite bounds so the feasible set is a polytope;
    a nonempty polytope attains its minimum at a basic point, i.e. at the
    intersection of n tight planes drawn from rows and bound planes.
    Returns (objective, x) or (None, None) when infeasible.
    """
    n = problem.num_vars
    if not (np.all(np.isfinite(problem.lower)) and np.all(np.isfinite(problem.upper))):
        raise ValueError("vertex enumeration needs finite bounds")

    normals = []
    offsets = []
    for row in problem.rows:
        dense = np.zeros(n)
        dense[row.indices] = row.coefs
        normals.append(dense)
        offsets.append(row.rhs)
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        normals.append(e)
        offsets.append(problem.lower[j])
        normals.append(e.copy())
        offsets.append(problem.upper[j])
    normals = np.array(normals)
    offsets = np.array(offsets)

    combos = np.array(list(itertools.combinations(range(len(normals)), n)))
    mats = normals[combos]
    rhss = offsets[combos]
    dets = np.abs(np.linalg.det(mats))
    keep = dets > 1e-10
    if not np.any(keep):
        return None, None
    points = np.linalg.solve(mats[keep], rhss[keep][..., None])[..., 0]

    in_box = np.all(points >= problem.lower - feas_tol, axis=1) & np.all(
        points <= problem.upper + feas_tol, axis=1
    )
    points = points[in_box]
    if points.shape[0] == 0:
        return None, None

    feasible = np.ones(points.shape[0], dtype=bool)
    for row in problem.rows:
        lhs = points[:, row.indices] @ row.coefs
        if row.relation is Relation.LE:
            feasible &= lhs <= row.rhs + feas_tol
        elif row.relation is Relation.GE:
            feasible &= lhs >= row.rhs - feas_tol
        else:
            feasible &= np.abs(lhs - row.rhs) <= feas_tol
    points = points[feasible]
    if points.shape[0] == 0:
        return None, None

    objs = points @ problem.objective
    k = int(np.argmin(objs))
    return float(objs[k]), points[k]


def independent_set_oracle(problem):
    """Max independent set size by subset enumeration.

    Decodes the edge rows (x_u + x_v <= 1) straight off the problem and
    ignores the objective storage; returns the minimized objective the
    solver should report (negated cardinality).
    """
    n = problem.num_vars
    edges = []
    for row in problem.rows:
        assert row.relation is Relation.LE and row.rhs == 1.0 and row.indices.size == 2
        edges.append((int(row.indices[0]), int(row.indices[1])))
    best = 0
    for bits in range(1 << n):
        chosen = [v for v in range(n) if bits >> v & 1]
        size = len(chosen)
        if size <= best:
            continue
        picked = set(chosen)
        if all(not (u in picked and v in picked) for u, v in edges):
            best = size
    return -float(best)


def set_cover_oracle(problem):
    """Min-cost cover by subset enumeration over the column sets."""
    n = problem.num_vars
    covers = []
    for row in problem.rows:
        assert row.relation is Relation.GE and row.rhs == 1.0
        covers.append(set(int(j) for j in row.indices))
    costs = problem.objective
    best = None
    for bits in range(1 << n):
        picked = set(j for j in range(n) if bits >> j & 1)
        if all(c & picked for c in covers):
            cost = float(sum(costs[j] for j in picked))
            if best is None or cost < best:
                best = cost
    return best
