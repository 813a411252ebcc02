"""Observation functions: solver state in, numeric arrays out.

Each observation function implements the same two-method contract:
``before_reset(state)`` runs once per episode before the first extraction
(a hook for clearing per-episode caches), and ``extract(state, done)``
turns the current solver state into arrays, returning None on terminal
transitions where no decision follows.
"""

from dataclasses import dataclass

import numpy as np

from . import engine
from .problem import Relation
from .simplex import BasisStatus

_BIG = 1e20

_RELATION_CODE = {Relation.LE: 1.0, Relation.EQ: 0.0, Relation.GE: -1.0}


class ObservationFunction:
    def before_reset(self, state):
        pass

    def extract(self, state, done):
        raise NotImplementedError


class NothingFunction(ObservationFunction):
    """Observation that is always absent; useful when only rewards matter."""

    def extract(self, state, done):
        return None


@dataclass
class BipartiteObservation:
    """Variable/constraint bipartite view of the node LP."""

    variable_features: np.ndarray  # (num_vars, 9)
    constraint_features: np.ndarray  # (num_cons, 4)
    edge_index: np.ndarray  # (2, nnz): [constraint row, variable column]
    edge_values: np.ndarray  # (nnz,)


VARIABLE_COLUMNS = (
    "objective_coef_normalized",
    "has_finite_lower",
    "has_finite_upper",
    "is_integer",
    "lp_value",
    "fractionality",
    "is_basic",
    "at_lower",
    "at_upper",
)

CONSTRAINT_COLUMNS = (
    "rhs_normalized",
    "relation_code",
    "dual_normalized",
    "tight_at_lp",
)

CANDIDATE_COLUMNS = (
    "objective_coef",
    "objective_coef_normalized",
    "row_count",
    "row_coef_mean",
    "row_coef_min",
    "row_coef_max",
    "lp_value",
    "fractionality",
    "distance_to_lower",
    "distance_to_upper",
    "pseudocost_score",
    "is_basic",
)


def _require_decision(state, done):
    if done or state.current_lp is None:
        return False
    return True


class BipartiteFunction(ObservationFunction):
    """Bipartite graph features of the node LP relaxation.

    Variable columns (9): objective coefficient over the objective inf-norm
    (raw if the norm is 0), finite-lower flag, finite-upper flag (both at
    problem level, where they are static), integrality flag, LP value,
    fractionality |v - round(v)|, and the three basis indicators.
    Constraint columns (4): rhs over the row coefficient inf-norm (raw if
    0), relation code (+1 for <=, 0 for =, -1 for >=), dual value over the
    objective inf-norm, and a tight-at-LP flag (slack nonbasic, equalities
    always tight). Edges carry coefficient over row inf-norm, ordered by
    (row, column).

    With ``cache_static_columns=True`` the four static variable columns are
    computed once per episode at the first extraction and reused afterwards;
    values are identical either way.
    """

    def __init__(self, cache_static_columns=False):
        self.cache_static_columns = cache_static_columns
        self._static = None

    def before_reset(self, state):
        self._static = None

    def _static_block(self, problem):
        n = problem.num_vars
        block = np.empty((n, 4))
        norm = float(np.abs(problem.objective).max(initial=0.0))
        block[:, 0] = problem.objective / norm if norm > 0 else problem.objective
        block[:, 1] = np.isfinite(problem.lower).astype(float)
        block[:, 2] = np.isfinite(problem.upper).astype(float)
        block[:, 3] = problem.is_integer.astype(float)
        return block

    def extract(self, state, done):
        if not _require_decision(state, done):
            return None
        problem = state.problem
        lp = state.current_lp
        n = problem.num_vars
        m = problem.num_cons

        if self.cache_static_columns:
            if self._static is None:
                self._static = self._static_block(problem)
            static = self._static
        else:
            static = self._static_block(problem)

        var = np.empty((n, 9))
        var[:, :4] = static
        var[:, 4] = lp.x
        var[:, 5] = np.abs(lp.x - np.round(lp.x))
        var[:, 6] = lp.var_status == BasisStatus.BASIC
        var[:, 7] = lp.var_status == BasisStatus.AT_LOWER
        var[:, 8] = lp.var_status == BasisStatus.AT_UPPER

        obj_norm = float(np.abs(problem.objective).max(initial=0.0))
        rows = problem.rows
        rhs = np.fromiter((row.rhs for row in rows), float, m)
        rel = np.fromiter((_RELATION_CODE[row.relation] for row in rows), float, m)
        counts = np.fromiter((row.indices.size for row in rows), np.int64, m)
        nnz = int(counts.sum())
        row_norm = np.zeros(m)
        if nnz:
            row_ids = np.repeat(np.arange(m, dtype=np.int64), counts)
            cols = np.concatenate([row.indices for row in rows])
            coefs = np.concatenate([row.coefs for row in rows])
            order = np.lexsort((cols, row_ids))
            coefs = coefs[order]
            # reduceat segments run to the next listed offset, so skipping
            # empty rows still yields each nonempty row's own slice
            offsets = np.zeros(m, dtype=np.int64)
            np.cumsum(counts[:-1], out=offsets[1:])
            nonempty = counts > 0
            row_norm[nonempty] = np.maximum.reduceat(np.abs(coefs), offsets[nonempty])
            scale = np.where(row_norm > 0, row_norm, 1.0)
            edge_index = np.empty((2, nnz), dtype=np.int64)
            edge_index[0] = row_ids
            edge_index[1] = cols[order]
            edge_values = coefs / scale[row_ids]
        else:
            scale = np.ones(m)
            edge_index = np.empty((2, 0), dtype=np.int64)
            edge_values = np.empty(0)

        cons = np.empty((m, 4))
        cons[:, 0] = rhs / scale
        cons[:, 1] = rel
        cons[:, 2] = lp.duals / obj_norm if obj_norm > 0 else lp.duals
        cons[:, 3] = (rel == 0.0) | (lp.row_status != BasisStatus.BASIC)

        return BipartiteObservation(
            variable_features=var,
            constraint_features=cons,
            edge_index=edge_index,
            edge_values=edge_values,
        )


@dataclass
class CandidateObservation:
    """Per-candidate features, rows aligned with the action set order."""

    features: np.ndarray  # (num_candidates, 12)
    candidates: np.ndarray  # (num_candidates,) variable indices


class CandidateFunction(ObservationFunction):
    """Feature rows for the branching candidates only.

    Columns (12): raw objective coefficient, objective coefficient over the
    objective inf-norm, number of rows touching the variable, mean/min/max
    of |coefficient| over those rows (zeros when the variable appears in no
    row), LP value, fractionality, distance of the LP value to the node
    lower/upper bound (clamped to 1e20 when infinite), current pseudocost
    score, and a basic-status flag.
    """

    def __init__(self):
        self._row_stats = None

    def before_reset(self, state):
        self._row_stats = None

    def _stats_for(self, problem):
        n = problem.num_vars
        count = np.zeros(n)
        total = np.zeros(n)
        cmin = np.full(n, np.inf)
        cmax = np.zeros(n)
        for row in problem.rows:
            a = np.abs(row.coefs)
            count[row.indices] += 1
            total[row.indices] += a
            np.minimum.at(cmin, row.indices, a)
            np.maximum.at(cmax, row.indices, a)
        mean = np.divide(total, count, out=np.zeros(n), where=count > 0)
        cmin[count == 0] = 0.0
        return count, mean, cmin, cmax

    def extract(self, state, done):
        if not _require_decision(state, done):
            return None
        problem = state.problem
        lp = state.current_lp
        cands = np.asarray(state.candidates, dtype=np.int64)
        if self._row_stats is None:
            self._row_stats = self._stats_for(problem)
        count, mean, cmin, cmax = self._row_stats

        lower, upper = engine.effective_bounds(state)
        obj_norm = float(np.abs(problem.objective).max(initial=0.0))
        x = lp.x[cands]
        feats = np.empty((cands.size, 12))
        feats[:, 0] = problem.objective[cands]
        feats[:, 1] = feats[:, 0] / obj_norm if obj_norm > 0 else feats[:, 0]
        feats[:, 2] = count[cands]
        feats[:, 3] = mean[cands]
        feats[:, 4] = cmin[cands]
        feats[:, 5] = cmax[cands]
        feats[:, 6] = x
        feats[:, 7] = np.abs(x - np.round(x))
        feats[:, 8] = np.minimum(x - lower[cands], _BIG)
        feats[:, 9] = np.minimum(upper[cands] - x, _BIG)
        feats[:, 10] = engine.pseudocost_scores(state, cands)
        feats[:, 11] = lp.var_status[cands] == BasisStatus.BASIC
        return CandidateObservation(features=feats, candidates=cands)


OBSERVATION_NAMES = {
    "nothing": NothingFunction,
    "bipartite": BipartiteFunction,
    "candidates": CandidateFunction,
}


def make_observation_function(name, cache=False):
    """Build an observation function from its CLI name."""
    if name not in OBSERVATION_NAMES:
        raise ValueError(f"unknown observation function {name!r}")
    if name == "bipartite":
        return BipartiteFunction(cache_static_columns=cache)
    return OBSERVATION_NAMES[name]()
