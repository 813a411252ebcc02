import numpy as np

from helpers import build_problem
from milpgym.problem import Constraint, Relation, validate


def test_relation_values():
    assert Relation.LE.value == "<="
    assert Relation.GE.value == ">="
    assert Relation.EQ.value == "="


def test_problem_shape_accessors():
    p = build_problem([1.0, 2.0, 3.0], [((0, 2), (1.0, 1.0), Relation.LE, 2.0)])
    assert p.num_vars == 3
    assert p.num_cons == 1


def test_structural_equality():
    p = build_problem([1.0, -1.0], [((0, 1), (1.0, 1.0), Relation.LE, 1.0)])
    q = build_problem([1.0, -1.0], [((0, 1), (1.0, 1.0), Relation.LE, 1.0)])
    assert p == q
    r = build_problem([1.0, -1.0], [((0, 1), (1.0, 2.0), Relation.LE, 1.0)])
    assert p != r
    assert p != build_problem([1.0, -1.0], [((0, 1), (1.0, 1.0), Relation.GE, 1.0)])


def test_constraint_equality_uses_array_contents():
    a = Constraint(np.array([0, 1]), np.array([1.0, 2.0]), Relation.LE, 3.0)
    b = Constraint(np.array([0, 1]), np.array([1.0, 2.0]), Relation.LE, 3.0)
    assert a == b


def test_validate_accepts_well_formed():
    p = build_problem([1.0, 2.0], [((0, 1), (1.0, 1.0), Relation.GE, 1.0)])
    report = validate(p)
    assert report.ok
    assert report.violations == []


def test_validate_catches_bad_shapes_and_values():
    p = build_problem([1.0, 2.0], [((0, 1), (1.0, 1.0), Relation.LE, 1.0)])
    p.lower = np.array([0.0])
    assert not validate(p).ok

    q = build_problem([1.0, np.inf], [])
    assert not validate(q).ok

    r = build_problem([1.0, 2.0], [])
    r.lower = np.array([2.0, 0.0])
    r.upper = np.array([1.0, 1.0])
    assert any("bound" in v or "lower" in v for v in validate(r).violations)


def test_validate_catches_bad_rows():
    p = build_problem([1.0, 2.0], [((0, 5), (1.0, 1.0), Relation.LE, 1.0)])
    assert not validate(p).ok

    dup = build_problem([1.0, 2.0], [((1, 1), (1.0, 1.0), Relation.LE, 1.0)])
    assert not validate(dup).ok

    nan_rhs = build_problem([1.0, 2.0], [((0, 1), (1.0, 1.0), Relation.LE, np.nan)])
    assert not validate(nan_rhs).ok
