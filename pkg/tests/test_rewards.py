import math

import numpy as np
import pytest

from helpers import tiny_knapsack
from milpgym.envs import Branching
from milpgym.rewards import (
    Constant,
    IsDone,
    LpIterations,
    NNodes,
    SolvingTime,
    parse_reward,
)


class _FakeState:
    def __init__(self, iters=0, nodes=0, seconds=0.0):
        self.total_lp_iterations = iters
        self.nodes_processed = nodes
        self.solve_seconds = seconds


def test_counter_leaves_measure_deltas():
    r = LpIterations()
    r.before_reset(_FakeState())
    assert r.evaluate(_FakeState(iters=7), False) == 7.0
    assert r.evaluate(_FakeState(iters=10), False) == 3.0
    assert r.evaluate(_FakeState(iters=10), True) == 0.0


def test_before_reset_pins_origin_to_zero():
    # the first delta covers everything accrued since the solve started,
    # even work done before the first measurement
    r = NNodes()
    r.before_reset(_FakeState(nodes=999))
    assert r.evaluate(_FakeState(nodes=5), False) == 5.0


def test_is_done_and_constant():
    d = IsDone()
    d.before_reset(_FakeState())
    assert d.evaluate(_FakeState(), False) == 0.0
    assert d.evaluate(_FakeState(), True) == 1.0
    c = Constant(2.5)
    c.before_reset(_FakeState())
    assert c.evaluate(_FakeState(), True) == 2.5


def test_operator_composition():
    expr = -LpIterations() + 3 * NNodes() ** 2
    expr.before_reset(_FakeState())
    got = expr.evaluate(_FakeState(iters=4, nodes=3), False)
    assert got == -4.0 + 3 * 9.0


def test_division_and_radd():
    expr = 1 / (1 + NNodes())
    expr.before_reset(_FakeState())
    assert expr.evaluate(_FakeState(nodes=3), False) == 0.25


def test_exp_log_abs():
    expr = (-Constant(3.0)).abs().log() + Constant(0.0).exp()
    expr.before_reset(_FakeState())
    got = expr.evaluate(_FakeState(), False)
    assert abs(got - (math.log(3.0) + 1.0)) < 1e-12


def test_ieee_semantics_no_exceptions():
    inf_expr = Constant(1.0) / Constant(0.0)
    inf_expr.before_reset(_FakeState())
    assert inf_expr.evaluate(_FakeState(), False) == np.inf

    nan_expr = Constant(0.0) / Constant(0.0)
    nan_expr.before_reset(_FakeState())
    assert math.isnan(nan_expr.evaluate(_FakeState(), False))

    neglog = Constant(0.0).log()
    neglog.before_reset(_FakeState())
    assert neglog.evaluate(_FakeState(), False) == -np.inf


def test_shared_leaf_evaluates_once_per_step():
    # the same leaf instance appears twice; its delta must be consumed
    # once, not advanced twice within a single evaluation
    leaf = LpIterations()
    expr = leaf + leaf
    expr.before_reset(_FakeState())
    assert expr.evaluate(_FakeState(iters=5), False) == 10.0
    assert expr.evaluate(_FakeState(iters=8), False) == 6.0


def test_canonical_text():
    expr = (LpIterations() ** 2) / (1 + NNodes())
    assert str(expr) == "((lp_iterations ^ 2) / (1 + nnodes))"
    assert str(-SolvingTime()) == "(- solving_time)"
    assert str(IsDone().exp()) == "exp(is_done)"


def test_parse_round_trip():
    for text in (
        "lp_iterations",
        "(lp_iterations ^ 2)",
        "((lp_iterations ^ 2) / (1 + nnodes))",
        "(- (3 * is_done))",
        "exp((- solving_time))",
        "log(abs((lp_iterations - 100)))",
    ):
        expr = parse_reward(text)
        assert str(parse_reward(str(expr))) == str(expr)


def test_parse_precedence():
    expr = parse_reward("1 + 2 * 3 ^ 2")
    expr.before_reset(_FakeState())
    assert expr.evaluate(_FakeState(), False) == 19.0
    # power binds right to left
    expr = parse_reward("2 ^ 3 ^ 2")
    expr.before_reset(_FakeState())
    assert expr.evaluate(_FakeState(), False) == 512.0
    # unary minus binds looser than the power, as in written math
    expr = parse_reward("-2 ^ 2")
    expr.before_reset(_FakeState())
    assert expr.evaluate(_FakeState(), False) == -4.0


def test_parse_rejects_garbage():
    for text in ("", "lp_iterations +", "(1", "1 2", "unknown_leaf", "1 $ 2"):
        with pytest.raises(ValueError):
            parse_reward(text)


def test_conservation_over_episode():
    env = Branching(reward_function=LpIterations())
    result = env.reset(tiny_knapsack())
    total = result.reward
    while not result.done:
        result = env.step(result.action_set[0])
        total += result.reward
    assert total == env.state.total_lp_iterations

    env = Branching(reward_function=NNodes())
    result = env.reset(tiny_knapsack())
    total = result.reward
    while not result.done:
        result = env.step(result.action_set[0])
        total += result.reward
    assert total == env.state.nodes_processed


def test_solving_time_accrues_positive():
    env = Branching(reward_function=SolvingTime())
    result = env.reset(tiny_knapsack())
    total = result.reward
    assert result.reward > 0.0
    while not result.done:
        result = env.step(result.action_set[0])
        assert result.reward >= 0.0
        total += result.reward
    assert abs(total - env.state.solve_seconds) < 1e-9


def test_composite_reward_matches_recomputation():
    # replay the same actions twice and check the composite against
    # values recomputed from the raw counters
    expr_text = "((lp_iterations ^ 2) / (1 + nnodes))"
    env = Branching(reward_function=parse_reward(expr_text))
    ref = Branching(reward_function=LpIterations())
    ref_nodes = Branching(reward_function=NNodes())

    r0 = env.reset(tiny_knapsack())
    i0 = ref.reset(tiny_knapsack())
    n0 = ref_nodes.reset(tiny_knapsack())
    assert r0.reward == (i0.reward ** 2) / (1 + n0.reward)
    a, b, c = r0, i0, n0
    while not a.done:
        action = a.action_set[0]
        a = env.step(action)
        b = ref.step(action)
        c = ref_nodes.step(action)
        assert a.reward == (b.reward ** 2) / (1 + c.reward)
