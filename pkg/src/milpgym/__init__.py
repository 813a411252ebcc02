"""milpgym: a controllable MILP branch-and-bound solver whose decision
points (branching variable selection, solver configuration) are exposed
as gym-style environments with composable observations and rewards."""

from . import errors
from .engine import (
    PARAMETER_SCHEMA,
    BranchRule,
    NodeSelection,
    Phase,
    SolverParams,
    SolverState,
    TerminationReason,
    branch,
    merge_params,
    run_to_completion,
    start,
)
from .envs import Branching, Configuring, Environment, StepResult
from .features import (
    BipartiteFunction,
    BipartiteObservation,
    CandidateFunction,
    CandidateObservation,
    NothingFunction,
)
from .instgen import gen_cap_facility, gen_comb_auction, gen_indep_set, gen_set_cover, generate, stream
from .lpfile import read_lp_file, read_lp_text, write_lp_file, write_lp_text
from .policies import first_candidate, make_rng, most_fractional, random_candidate
from .problem import Constraint, Problem, Relation, ValidationReport, validate
from .rewards import Constant, IsDone, LpIterations, NNodes, RewardExpr, SolvingTime, parse_reward
from .simplex import BasisStatus, LpResult, LpStatus, SimplexSolver, solve_lp

__version__ = "0.1.0"

__all__ = [
    "BasisStatus",
    "BipartiteFunction",
    "BipartiteObservation",
    "BranchRule",
    "Branching",
    "CandidateFunction",
    "CandidateObservation",
    "Configuring",
    "Constant",
    "Constraint",
    "Environment",
    "IsDone",
    "LpIterations",
    "LpResult",
    "LpStatus",
    "NNodes",
    "NodeSelection",
    "NothingFunction",
    "Phase",
    "Problem",
    "Relation",
    "RewardExpr",
    "SimplexSolver",
    "PARAMETER_SCHEMA",
    "SolverParams",
    "SolverState",
    "SolvingTime",
    "StepResult",
    "TerminationReason",
    "ValidationReport",
    "branch",
    "errors",
    "first_candidate",
    "gen_cap_facility",
    "gen_comb_auction",
    "gen_indep_set",
    "gen_set_cover",
    "generate",
    "make_rng",
    "merge_params",
    "most_fractional",
    "parse_reward",
    "random_candidate",
    "read_lp_file",
    "read_lp_text",
    "run_to_completion",
    "solve_lp",
    "start",
    "stream",
    "validate",
    "write_lp_file",
    "write_lp_text",
]
