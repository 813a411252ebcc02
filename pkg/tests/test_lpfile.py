import numpy as np
import pytest

from helpers import build_problem, random_binary_milp
from milpgym.errors import LpParseError, UnsupportedLpFeatureError
from milpgym.instgen import generate
from milpgym.lpfile import read_lp_text, write_lp_file, write_lp_text
from milpgym.policies import make_rng
from milpgym.problem import Relation

SAMPLE = """\
\\ name: sample
Minimize
 obj: 2 x + 3.5 y - z
Subject To
 c1: x + y <= 4
 c2: 2 x - 3 z >= -1
 c3: y + z = 2
Bounds
 0 <= x <= 10
 y free
 -2 <= z <= 2
General
 x
End
"""


def test_read_basic_sections():
    p = read_lp_text(SAMPLE)
    assert p.name == "sample"
    assert p.num_vars == 3
    assert p.num_cons == 3
    np.testing.assert_array_equal(p.objective, [2.0, 3.5, -1.0])
    np.testing.assert_array_equal(p.lower, [0.0, -np.inf, -2.0])
    np.testing.assert_array_equal(p.upper, [10.0, np.inf, 2.0])
    np.testing.assert_array_equal(p.is_integer, [True, False, False])
    assert p.rows[0].relation == Relation.LE
    assert p.rows[1].relation == Relation.GE
    assert p.rows[2].relation == Relation.EQ
    assert p.rows[1].rhs == -1.0
    assert not p.maximize


def test_maximize_is_negated_and_flagged():
    text = "Maximize\n obj: x + 2 y\nSubject To\n c: x + y <= 1\nBinary\n x\n y\nEnd\n"
    p = read_lp_text(text)
    assert p.maximize
    np.testing.assert_array_equal(p.objective, [-1.0, -2.0])
    # the writer re-emits the minimization form it stores
    back = read_lp_text(write_lp_text(p))
    assert back == p


def test_binary_section_sets_unit_bounds():
    text = "Minimize\n obj: x + y\nSubject To\n c: x + y >= 1\nBinary\n x\n y\nEnd\n"
    p = read_lp_text(text)
    np.testing.assert_array_equal(p.lower, [0.0, 0.0])
    np.testing.assert_array_equal(p.upper, [1.0, 1.0])
    assert p.is_integer.all()


def test_duplicate_terms_merge():
    text = "Minimize\n obj: x + x\nSubject To\n c: 2 x + 3 x <= 4\nEnd\n"
    p = read_lp_text(text)
    np.testing.assert_array_equal(p.objective, [2.0])
    np.testing.assert_array_equal(p.rows[0].coefs, [5.0])


def test_round_trip_hand_built():
    p = build_problem(
        [1.25, -3.0, 0.0],
        [
            ((0, 1), (1.0, -2.5), Relation.LE, 7.5),
            ((0, 2), (4.0, 1.0), Relation.EQ, 1.0),
        ],
        lower=[0.0, -np.inf, -1.5],
        upper=[np.inf, 10.0, 1.5],
        integer=[True, False, False],
        name="hand",
    )
    assert read_lp_text(write_lp_text(p)) == p


def test_round_trip_generated_instances():
    for family, params in (
        ("set_cover", dict(rows=8, cols=16, density=0.3, max_cost=20)),
        ("comb_auction", dict(items=8, bids=20)),
        ("cap_facility", dict(customers=4, facilities=3, ratio=2.0)),
        ("indep_set", dict(n_nodes=10, edge_prob=0.3)),
    ):
        p = generate(family, seed=5, index=0, **params)
        assert read_lp_text(write_lp_text(p)) == p


def test_round_trip_random_milps():
    rng = make_rng(77)
    for _ in range(25):
        p = random_binary_milp(rng)
        assert read_lp_text(write_lp_text(p)) == p


def test_writer_is_byte_deterministic(tmp_path):
    p = generate("set_cover", seed=1, index=0, rows=6, cols=12, density=0.4, max_cost=9)
    a = tmp_path / "a.lp"
    b = tmp_path / "b.lp"
    write_lp_file(p, a)
    write_lp_file(p, b)
    assert a.read_bytes() == b.read_bytes()


def test_shortest_round_trip_decimals():
    p = build_problem([0.1, 1.0], [((0, 1), (0.30000000000000004, 2.0), Relation.LE, 1.1)])
    text = write_lp_text(p)
    assert "0.1 " in text
    assert "0.30000000000000004" in text
    assert "1.1" in text
    assert read_lp_text(text) == p


def test_parse_error_carries_line_and_column():
    bad = "Minimize\n obj: 2 x + $ y\nEnd\n"
    with pytest.raises(LpParseError) as exc:
        read_lp_text(bad)
    assert exc.value.line == 2
    assert "column" in str(exc.value)


def test_missing_relation_is_an_error():
    with pytest.raises(LpParseError):
        read_lp_text("Minimize\n obj: x\nSubject To\n c: x + y\nEnd\n")


def test_unsupported_features_are_named():
    with pytest.raises(UnsupportedLpFeatureError):
        read_lp_text("Minimize\n obj: x ^ 2\nEnd\n")
    with pytest.raises(UnsupportedLpFeatureError):
        read_lp_text("Minimize\n obj: [ x * y ]\nEnd\n")
    with pytest.raises(UnsupportedLpFeatureError):
        read_lp_text("Minimize\n obj: x\nSOS\n s1: S1:: x:1\nEnd\n")
    with pytest.raises(UnsupportedLpFeatureError):
        read_lp_text("Minimize\n obj: x\nSubject To\n c: b = 1 -> x <= 1\nEnd\n")


def test_infinite_bounds_keywords():
    text = (
        "Minimize\n obj: x\nSubject To\n c: x <= 5\n"
        "Bounds\n -inf <= x <= +infinity\nEnd\n"
    )
    p = read_lp_text(text)
    assert p.lower[0] == -np.inf
    assert p.upper[0] == np.inf
