"""Branch-and-bound engine with an interruptible decision loop.

The engine runs LP-relaxation branch and bound and stops at every node
whose relaxation is fractional, handing control back to the caller. The
caller picks the branching variable (an agent, a policy, or the built-in
rule via run_to_completion) and the engine resumes: it enqueues the two
children, then keeps popping, pruning and solving nodes until the next
fractional relaxation or a terminal condition.

Everything is deterministic: node selection has fixed tie-breaking, the
LP solver replays identical pivots, and no randomness is consumed. The
``seed`` parameter is accepted and recorded because it belongs to the
declared parameter schema, but nothing in the current engine draws from
it.

Conventions: all objectives are in minimized form. A node counts as
processed when its LP is solved (the root included); pruning a node by
bound does not count. The dual bound is the minimum over the bound
estimates of open nodes (a child inherits its parent's LP objective),
clamped to the incumbent objective once one exists, so it never decreases
and never exceeds the incumbent.
"""

import heapq
import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import (
    InvalidActionError,
    InvalidParameterError,
    InvalidProblemError,
    SimplexFailureError,
    SolverPhaseError,
    UnboundedRelaxationError,
)
from .problem import validate
from .simplex import LpStatus, SimplexSolver

INT_TOL = 1e-6
PRUNE_EPS = 1e-9


class NodeSelection(Enum):
    BEST_BOUND = "best_bound"
    DFS = "dfs"


class BranchRule(Enum):
    FIRST_FRACTIONAL = "first_fractional"
    MOST_FRACTIONAL = "most_fractional"
    PSEUDOCOST = "pseudocost"


class Phase(Enum):
    NOT_STARTED = "not_started"
    AT_DECISION = "at_decision"
    FINISHED = "finished"


class TerminationReason(Enum):
    OPTIMAL = "optimal"
    NODE_LIMIT = "node_limit"
    TIME_LIMIT = "time_limit"
    INFEASIBLE = "infeasible"
    GAP_REACHED = "gap_reached"


@dataclass(frozen=True)
class SolverParams:
    node_limit: int = None  # None means unlimited
    time_limit: float = None  # seconds, None means unlimited
    gap_tol: float = 1e-9
    node_selection: NodeSelection = NodeSelection.BEST_BOUND
    internal_branching: BranchRule = BranchRule.MOST_FRACTIONAL
    seed: int = 0


PARAMETER_SCHEMA = (
    {"name": "node_limit", "type": "int", "min": 0, "nullable": True, "default": None},
    {"name": "time_limit", "type": "float", "min": 0.0, "nullable": True, "default": None},
    {"name": "gap_tol", "type": "float", "min": 0.0, "nullable": False, "default": 1e-9},
    {
        "name": "node_selection",
        "type": "choice",
        "choices": [s.value for s in NodeSelection],
        "default": NodeSelection.BEST_BOUND.value,
    },
    {
        "name": "internal_branching",
        "type": "choice",
        "choices": [r.value for r in BranchRule],
        "default": BranchRule.MOST_FRACTIONAL.value,
    },
    {"name": "seed", "type": "int", "min": 0, "max": 2**64 - 1, "nullable": False, "default": 0},
)

_ENUM_FIELDS = {"node_selection": NodeSelection, "internal_branching": BranchRule}


def merge_params(base, updates):
    """Overlay a plain mapping onto SolverParams, validating every entry."""
    base = base if base is not None else SolverParams()
    spec_by_name = {s["name"]: s for s in PARAMETER_SCHEMA}
    clean = {}
    for key, value in updates.items():
        if key not in spec_by_name:
            raise InvalidParameterError(f"unknown parameter {key!r}")
        spec = spec_by_name[key]
        if value is None:
            if not spec.get("nullable"):
                raise InvalidParameterError(f"{key} cannot be null")
            clean[key] = None
            continue
        if spec["type"] == "choice":
            enum = _ENUM_FIELDS[key]
            if isinstance(value, enum):
                clean[key] = value
                continue
            try:
                clean[key] = enum(value)
            except ValueError:
                raise InvalidParameterError(
                    f"{key} must be one of {spec['choices']}, got {value!r}"
                ) from None
            continue
        if spec["type"] == "int":
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidParameterError(f"{key} must be an integer, got {value!r}")
            value = int(value)
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float, np.floating)):
                raise InvalidParameterError(f"{key} must be a number, got {value!r}")
            value = float(value)
        if "min" in spec and value < spec["min"]:
            raise InvalidParameterError(f"{key} must be >= {spec['min']}, got {value}")
        if "max" in spec and value > spec["max"]:
            raise InvalidParameterError(f"{key} must be <= {spec['max']}, got {value}")
        clean[key] = value
    return replace(base, **clean)


def params_to_dict(params):
    return {
        "node_limit": params.node_limit,
        "time_limit": params.time_limit,
        "gap_tol": params.gap_tol,
        "node_selection": params.node_selection.value,
        "internal_branching": params.internal_branching.value,
        "seed": params.seed,
    }


@dataclass
class _Node:
    overrides: dict  # var index -> (lower, upper)
    bound: float  # inherited LP objective of the parent (-inf at the root)
    depth: int
    insertion: int
    branch_var: int = None
    branch_up: bool = False
    parent_obj: float = None
    fractionality: float = None


@dataclass
class SolverState:
    problem: object
    params: SolverParams
    phase: Phase = Phase.NOT_STARTED
    termination_reason: TerminationReason = None
    incumbent_x: np.ndarray = None
    incumbent_obj: float = None
    dual_bound: float = -math.inf
    nodes_processed: int = 0
    total_lp_iterations: int = 0
    solve_seconds: float = 0.0
    current_node: _Node = None
    current_lp: object = None
    candidates: list = field(default_factory=list)
    # pseudocost accumulators: per-unit objective degradation sums and counts
    pc_up_sum: np.ndarray = None
    pc_up_cnt: np.ndarray = None
    pc_down_sum: np.ndarray = None
    pc_down_cnt: np.ndarray = None
    _open: list = field(default_factory=list)
    _insertions: int = 0
    _solver: SimplexSolver = None
    _clock_depth: int = 0
    _call_t0: float = 0.0

    @property
    def is_done(self):
        return self.phase is Phase.FINISHED


class _clock:
    """Accumulates wall time spent inside engine entry points (outermost only)."""

    def __init__(self, state):
        self.state = state

    def __enter__(self):
        if self.state._clock_depth == 0:
            self.state._call_t0 = time.perf_counter()
        self.state._clock_depth += 1

    def __exit__(self, *exc):
        self.state._clock_depth -= 1
        if self.state._clock_depth == 0:
            self.state.solve_seconds += time.perf_counter() - self.state._call_t0
        return False


def _elapsed(state):
    running = time.perf_counter() - state._call_t0 if state._clock_depth else 0.0
    return state.solve_seconds + running


def new_state(problem, params=None):
    """Validate inputs and build a not-yet-started solver state."""
    report = validate(problem)
    if not report.ok:
        raise InvalidProblemError("; ".join(report.violations))
    if params is None:
        params = SolverParams()
    if not isinstance(params, SolverParams):
        raise InvalidParameterError("params must be a SolverParams instance")
    merge_params(None, params_to_dict(params))  # range-check field values
    n = problem.num_vars
    return SolverState(
        problem=problem,
        params=params,
        pc_up_sum=np.zeros(n),
        pc_up_cnt=np.zeros(n, dtype=np.int64),
        pc_down_sum=np.zeros(n),
        pc_down_cnt=np.zeros(n, dtype=np.int64),
        _solver=SimplexSolver(problem),
    )


def begin(state):
    """Enqueue the root node and run until a decision point or the end."""
    if state.phase is not Phase.NOT_STARTED:
        raise SolverPhaseError(f"begin() requires NOT_STARTED, state is {state.phase.name}")
    with _clock(state):
        root = _Node(overrides={}, bound=-math.inf, depth=0, insertion=0)
        state._insertions = 1
        _push(state, root)
        state.phase = Phase.AT_DECISION  # provisional; _advance settles it
        _advance(state)
    return state


def start(problem, params=None):
    """Validate, solve the root relaxation and stop at the first decision.

    Returns the SolverState, which is FINISHED already when the root is
    integral, infeasible, or a limit intervened.
    """
    return begin(new_state(problem, params))


def branch(state, var_index):
    """Split the current node on var_index and resume the search."""
    if state.phase is not Phase.AT_DECISION:
        raise SolverPhaseError(f"branch() requires AT_DECISION, state is {state.phase.name}")
    var_index = int(var_index)
    if var_index not in state.candidates:
        raise InvalidActionError(
            f"variable {var_index} is not among the branching candidates {state.candidates}"
        )
    with _clock(state):
        node = state.current_node
        value = float(state.current_lp.x[var_index])
        obj = float(state.current_lp.objective)
        floor_v = math.floor(value)
        down = dict(node.overrides)
        lo_d, up_d = down.get(var_index, (state.problem.lower[var_index], state.problem.upper[var_index]))
        down[var_index] = (lo_d, float(floor_v))
        up = dict(node.overrides)
        lo_u, up_u = up.get(var_index, (state.problem.lower[var_index], state.problem.upper[var_index]))
        up[var_index] = (float(floor_v + 1), up_u)
        frac = value - floor_v
        _push(
            state,
            _Node(
                overrides=down,
                bound=obj,
                depth=node.depth + 1,
                insertion=state._insertions,
                branch_var=var_index,
                branch_up=False,
                parent_obj=obj,
                fractionality=frac,
            ),
        )
        _push(
            state,
            _Node(
                overrides=up,
                bound=obj,
                depth=node.depth + 1,
                insertion=state._insertions + 1,
                branch_var=var_index,
                branch_up=True,
                parent_obj=obj,
                fractionality=1.0 - frac,
            ),
        )
        state._insertions += 2
        state.current_node = None
        state.current_lp = None
        state.candidates = []
        _advance(state)
    return state


def run_to_completion(state):
    """Drive the search with the configured internal branching rule."""
    if state.phase is Phase.NOT_STARTED:
        begin(state)
    with _clock(state):
        while state.phase is Phase.AT_DECISION:
            branch(state, pick_branch_variable(state))
    return state


def pick_branch_variable(state):
    """Apply params.internal_branching to the current candidate set."""
    if state.phase is not Phase.AT_DECISION:
        raise SolverPhaseError("no branching candidates outside AT_DECISION")
    rule = state.params.internal_branching
    cands = state.candidates
    if rule is BranchRule.FIRST_FRACTIONAL:
        return cands[0]
    if rule is BranchRule.MOST_FRACTIONAL:
        x = state.current_lp.x
        fracs = [abs(x[j] - round(x[j])) for j in cands]
        return cands[int(np.argmax(fracs))]
    scores = pseudocost_scores(state, cands)
    return cands[int(np.argmax(scores))]


def pseudocost_scores(state, var_indices):
    """Product of average up/down per-unit degradations; 1.0 before data."""
    out = np.empty(len(var_indices))
    for k, j in enumerate(var_indices):
        up = state.pc_up_sum[j] / state.pc_up_cnt[j] if state.pc_up_cnt[j] else 1.0
        down = state.pc_down_sum[j] / state.pc_down_cnt[j] if state.pc_down_cnt[j] else 1.0
        out[k] = up * down
    return out


def _push(state, node):
    if state.params.node_selection is NodeSelection.BEST_BOUND:
        heapq.heappush(state._open, (node.bound, node.insertion, node))
    else:
        state._open.append(node)


def _pop(state):
    if state.params.node_selection is NodeSelection.BEST_BOUND:
        return heapq.heappop(state._open)[2]
    return state._open.pop()


def _open_bound_min(state):
    if not state._open:
        return math.inf
    if state.params.node_selection is NodeSelection.BEST_BOUND:
        return state._open[0][0]
    return min(n.bound for n in state._open)


def _finish(state, reason):
    state.phase = Phase.FINISHED
    state.termination_reason = reason
    state.current_node = None
    state.current_lp = None
    state.candidates = []
    if reason is TerminationReason.OPTIMAL:
        state.dual_bound = state.incumbent_obj
    elif reason is TerminationReason.INFEASIBLE:
        state.dual_bound = math.inf
    else:
        state.dual_bound = _dual_bound(state, math.inf)


def _dual_bound(state, extra):
    cand = min(_open_bound_min(state), extra)
    if state.incumbent_obj is not None:
        cand = min(cand, state.incumbent_obj)
    return cand


def _node_bounds(state, node):
    lower = state.problem.lower.copy()
    upper = state.problem.upper.copy()
    for j, (lo, up) in node.overrides.items():
        lower[j] = lo
        upper[j] = up
    return lower, upper


def effective_bounds(state):
    """Variable bounds of the node under inspection (problem bounds plus
    the branching decisions on the path to it)."""
    if state.current_node is None:
        return state.problem.lower.copy(), state.problem.upper.copy()
    return _node_bounds(state, state.current_node)


def _advance(state):
    """Pop, prune and solve until AT_DECISION or FINISHED."""
    params = state.params
    problem = state.problem
    int_idx = np.nonzero(problem.is_integer)[0]

    while True:
        if params.time_limit is not None and _elapsed(state) > params.time_limit:
            _finish(state, TerminationReason.TIME_LIMIT)
            return
        if not state._open:
            if state.incumbent_obj is not None:
                _finish(state, TerminationReason.OPTIMAL)
            else:
                _finish(state, TerminationReason.INFEASIBLE)
            return
        if params.node_limit is not None and state.nodes_processed >= params.node_limit:
            _finish(state, TerminationReason.NODE_LIMIT)
            return

        node = _pop(state)
        if state.incumbent_obj is not None and node.bound >= state.incumbent_obj - PRUNE_EPS:
            continue
        if state.incumbent_obj is not None:
            gap = state.incumbent_obj - _dual_bound(state, node.bound)
            if gap <= params.gap_tol * max(1.0, abs(state.incumbent_obj)):
                _push(state, node)
                _finish(state, TerminationReason.GAP_REACHED)
                return

        lower, upper = _node_bounds(state, node)
        result = state._solver.solve(lower=lower, upper=upper)
        state.nodes_processed += 1
        state.total_lp_iterations += result.iterations

        if result.status is LpStatus.ITERATION_LIMIT:
            raise SimplexFailureError("LP iteration limit hit inside branch and bound")
        if result.status is LpStatus.UNBOUNDED:
            raise UnboundedRelaxationError("LP relaxation is unbounded")
        if result.status is LpStatus.INFEASIBLE:
            continue

        obj = result.objective
        if node.branch_var is not None and node.fractionality > INT_TOL:
            per_unit = max(obj - node.parent_obj, 0.0) / node.fractionality
            if node.branch_up:
                state.pc_up_sum[node.branch_var] += per_unit
                state.pc_up_cnt[node.branch_var] += 1
            else:
                state.pc_down_sum[node.branch_var] += per_unit
                state.pc_down_cnt[node.branch_var] += 1

        if state.incumbent_obj is not None and obj >= state.incumbent_obj - PRUNE_EPS:
            continue

        x = result.x
        fractional = [int(j) for j in int_idx if abs(x[j] - round(x[j])) > INT_TOL]
        if not fractional:
            x_inc = x.copy()
            x_inc[int_idx] = np.round(x_inc[int_idx])
            obj_inc = float(problem.objective @ x_inc)
            if state.incumbent_obj is None or obj_inc < state.incumbent_obj:
                state.incumbent_x = x_inc
                state.incumbent_obj = obj_inc
            continue

        node.bound = obj
        state.current_node = node
        state.current_lp = result
        state.candidates = fractional
        state.phase = Phase.AT_DECISION
        state.dual_bound = _dual_bound(state, obj)
        return
