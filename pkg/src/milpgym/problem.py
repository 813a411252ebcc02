"""In-memory MILP representation and structural validation.

Every problem is normalized to minimization at construction time. When a
maximization model is loaded (or generated), its objective is negated and
``maximize=True`` is recorded so file output can restore the original sense.
All solver-facing code only ever sees the minimized form.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class Relation(Enum):
    LE = "<="
    GE = ">="
    EQ = "="


@dataclass
class Constraint:
    """One linear row: sum(coefs[i] * x[indices[i]]) REL rhs."""

    indices: np.ndarray
    coefs: np.ndarray
    relation: Relation
    rhs: float

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.coefs = np.asarray(self.coefs, dtype=np.float64)
        self.rhs = float(self.rhs)

    def __eq__(self, other):
        if not isinstance(other, Constraint):
            return NotImplemented
        return (
            self.relation is other.relation
            and self.rhs == other.rhs
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.coefs, other.coefs)
        )


@dataclass
class Problem:
    """A mixed-integer linear program in minimized form.

    Parameters
    ----------
    name : str
        Label used in file output and traces.
    objective : array of float
        Objective coefficients, one per variable, for the minimized form.
    lower, upper : arrays of float
        Variable bounds; -inf / +inf mark unbounded sides.
    is_integer : array of bool
        Integrality flag per variable.
    rows : list of Constraint
        Linear constraints.
    maximize : bool
        True when the original formulation maximized; ``objective`` is then
        the negated original. Reported solver objectives stay in minimized
        form, only file output restores the original sense.
    """

    name: str
    objective: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    is_integer: np.ndarray
    rows: list = field(default_factory=list)
    maximize: bool = False

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=np.float64)
        self.lower = np.asarray(self.lower, dtype=np.float64)
        self.upper = np.asarray(self.upper, dtype=np.float64)
        self.is_integer = np.asarray(self.is_integer, dtype=bool)

    @property
    def num_vars(self):
        return self.objective.shape[0]

    @property
    def num_cons(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Problem):
            return NotImplemented
        return (
            self.name == other.name
            and self.maximize == other.maximize
            and np.array_equal(self.objective, other.objective)
            and np.array_equal(self.lower, other.lower)
            and np.array_equal(self.upper, other.upper)
            and np.array_equal(self.is_integer, other.is_integer)
            and self.rows == other.rows
        )


@dataclass
class ValidationReport:
    ok: bool
    violations: list


def validate(problem):
    """Check every structural invariant of a Problem.

    Returns
    -------
    ValidationReport
        ``ok`` is True iff no invariant is violated; ``violations`` lists a
        message for every failure found (not just the first).
    """
    v = []
    n = problem.num_vars

    for arr, label in (
        (problem.lower, "lower"),
        (problem.upper, "upper"),
        (problem.is_integer, "is_integer"),
    ):
        if arr.shape != (n,):
            v.append(f"{label} has shape {arr.shape}, expected ({n},)")

    if not np.all(np.isfinite(problem.objective)):
        v.append("objective contains non-finite coefficients")
    if np.any(np.isnan(problem.lower)) or np.any(np.isnan(problem.upper)):
        v.append("variable bounds contain NaN")
    elif problem.lower.shape == (n,) and problem.upper.shape == (n,):
        bad = np.nonzero(problem.lower > problem.upper)[0]
        for j in bad:
            v.append(f"variable {j}: lower {problem.lower[j]} > upper {problem.upper[j]}")

    for i, row in enumerate(problem.rows):
        if row.indices.shape != row.coefs.shape:
            v.append(f"row {i}: indices/coefs length mismatch")
            continue
        if row.indices.size and (row.indices.min() < 0 or row.indices.max() >= n):
            v.append(f"row {i}: variable index out of range")
        if len(np.unique(row.indices)) != row.indices.size:
            v.append(f"row {i}: duplicate variable index")
        if not np.all(np.isfinite(row.coefs)):
            v.append(f"row {i}: non-finite coefficient")
        if not np.isfinite(row.rhs):
            v.append(f"row {i}: non-finite right-hand side")

    return ValidationReport(ok=not v, violations=v)
