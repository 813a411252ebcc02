"""Composable reward expressions over solver counters.

Leaves measure the change of an engine counter since the previous decision
point, not its absolute value: at every evaluation a leaf reports
``current - last_seen`` and remembers ``current``. before_reset pins
``last_seen`` to the counter's solve-start value (zero), so the value
returned at reset equals everything accrued between the start of solving
and the first decision point. Summing the reset value and all step values
therefore reproduces the engine's cumulative counter exactly.

Expressions compose with the usual Python operators plus exp/log/abs, and
have a canonical infix text form, e.g. ``(lp_iterations ^ 2)``, that
parse_reward reads back. Arithmetic follows IEEE semantics (1/0 is inf,
log(0) is -inf) so composed rewards never raise mid-episode.
"""

import math
import re

import numpy as np


class RewardExpr:
    """Base expression node; subclasses implement _eval and _text."""

    def before_reset(self, state):
        for child in self._children():
            child.before_reset(state)

    def evaluate(self, state, done=False):
        """Evaluate once for this transition; shared subtrees count once."""
        return self._eval(state, done, {})

    def _memo(self, memo, compute):
        key = id(self)
        if key not in memo:
            memo[key] = compute()
        return memo[key]

    def _children(self):
        return ()

    def _eval(self, state, done, memo):
        raise NotImplementedError

    def _text(self):
        raise NotImplementedError

    def to_text(self):
        return self._text()

    def __str__(self):
        return self._text()

    def __repr__(self):
        return f"{type(self).__name__}[{self._text()}]"

    # operator algebra; plain numbers are promoted to Constant
    def __add__(self, other):
        return _BinOp("+", self, _wrap(other))

    def __radd__(self, other):
        return _BinOp("+", _wrap(other), self)

    def __sub__(self, other):
        return _BinOp("-", self, _wrap(other))

    def __rsub__(self, other):
        return _BinOp("-", _wrap(other), self)

    def __mul__(self, other):
        return _BinOp("*", self, _wrap(other))

    def __rmul__(self, other):
        return _BinOp("*", _wrap(other), self)

    def __truediv__(self, other):
        return _BinOp("/", self, _wrap(other))

    def __rtruediv__(self, other):
        return _BinOp("/", _wrap(other), self)

    def __pow__(self, other):
        return _BinOp("^", self, _wrap(other))

    def __rpow__(self, other):
        return _BinOp("^", _wrap(other), self)

    def __neg__(self):
        return _UnOp("neg", self)

    def __abs__(self):
        return _UnOp("abs", self)

    def exp(self):
        return _UnOp("exp", self)

    def log(self):
        return _UnOp("log", self)

    def abs(self):
        return _UnOp("abs", self)


def _wrap(value):
    if isinstance(value, RewardExpr):
        return value
    if isinstance(value, (int, float, np.integer, np.floating)):
        return Constant(float(value))
    raise TypeError(f"cannot use {value!r} in a reward expression")


class _CounterLeaf(RewardExpr):
    """Delta of one engine counter; subclasses name the counter."""

    def __init__(self):
        self._last = 0.0

    def before_reset(self, state):
        self._last = 0.0

    def _current(self, state):
        raise NotImplementedError

    def _eval(self, state, done, memo):
        def compute():
            current = float(self._current(state))
            delta = current - self._last
            self._last = current
            return delta

        return self._memo(memo, compute)

    def _text(self):
        return self.NAME


class LpIterations(_CounterLeaf):
    NAME = "lp_iterations"

    def _current(self, state):
        return state.total_lp_iterations


class NNodes(_CounterLeaf):
    NAME = "nnodes"

    def _current(self, state):
        return state.nodes_processed


class SolvingTime(_CounterLeaf):
    NAME = "solving_time"

    def _current(self, state):
        return state.solve_seconds


class IsDone(RewardExpr):
    """1.0 on the transition that ends the episode, else 0.0."""

    def _eval(self, state, done, memo):
        return 1.0 if done else 0.0

    def _text(self):
        return "is_done"


class Constant(RewardExpr):
    def __init__(self, value):
        self.value = float(value)

    def _eval(self, state, done, memo):
        return self.value

    def _text(self):
        v = self.value
        if v == int(v) and abs(v) < 1e16:
            return str(int(v))
        return repr(v)


class _BinOp(RewardExpr):
    def __init__(self, op, left, right):
        self.op = op
        self.left = left
        self.right = right

    def _children(self):
        return (self.left, self.right)

    def _eval(self, state, done, memo):
        def compute():
            a = self.left._eval(state, done, memo)
            b = self.right._eval(state, done, memo)
            with np.errstate(all="ignore"):
                if self.op == "+":
                    r = np.float64(a) + b
                elif self.op == "-":
                    r = np.float64(a) - b
                elif self.op == "*":
                    r = np.float64(a) * b
                elif self.op == "/":
                    r = np.divide(np.float64(a), b)
                else:
                    r = np.power(np.float64(a), b)
            return float(r)

        return self._memo(memo, compute)

    def _text(self):
        return f"({self.left._text()} {self.op} {self.right._text()})"


class _UnOp(RewardExpr):
    def __init__(self, op, arg):
        self.op = op
        self.arg = arg

    def _children(self):
        return (self.arg,)

    def _eval(self, state, done, memo):
        def compute():
            a = self.arg._eval(state, done, memo)
            with np.errstate(all="ignore"):
                if self.op == "neg":
                    return float(-np.float64(a))
                if self.op == "exp":
                    return float(np.exp(a))
                if self.op == "log":
                    return float(np.log(a))
                return float(np.abs(a))

        return self._memo(memo, compute)

    def _text(self):
        if self.op == "neg":
            return f"(- {self.arg._text()})"
        return f"{self.op}({self.arg._text()})"


LEAF_NAMES = {
    "lp_iterations": LpIterations,
    "nnodes": NNodes,
    "solving_time": SolvingTime,
    "is_done": IsDone,
}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)


def parse_reward(text):
    """Parse the reward mini-grammar into an expression tree.

    Grammar (loosest binding first): ``a + b | a - b``, ``a * b | a / b``,
    unary ``-``, ``a ^ b`` (right-associative), atoms: numbers, the leaves
    lp_iterations / nnodes / solving_time / is_done, ``exp(e)``, ``log(e)``,
    ``abs(e)``, parentheses.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ValueError(f"bad reward expression near {rest[:12]!r}")
        tokens.append((m.lastgroup, m.group().strip()))
        pos = m.end()

    idx = [0]

    def peek():
        return tokens[idx[0]] if idx[0] < len(tokens) else (None, None)

    def take():
        tok = peek()
        idx[0] += 1
        return tok

    def parse_sum():
        node = parse_product()
        while peek() == ("op", "+") or peek() == ("op", "-"):
            _, op = take()
            rhs = parse_product()
            node = _BinOp(op, node, rhs)
        return node

    def parse_product():
        node = parse_unary()
        while peek() == ("op", "*") or peek() == ("op", "/"):
            _, op = take()
            node = _BinOp(op, node, parse_unary())
        return node

    def parse_unary():
        if peek() == ("op", "-"):
            take()
            return _UnOp("neg", parse_unary())
        return parse_power()

    def parse_power():
        base = parse_atom()
        if peek() == ("op", "^"):
            take()
            return _BinOp("^", base, parse_unary())
        return base

    def parse_atom():
        kind, tok = take()
        if kind == "num":
            return Constant(float(tok))
        if kind == "name":
            if tok in LEAF_NAMES:
                return LEAF_NAMES[tok]()
            if tok in ("exp", "log", "abs"):
                k, t = take()
                if (k, t) != ("op", "("):
                    raise ValueError(f"{tok} needs parentheses")
                inner = parse_sum()
                k, t = take()
                if (k, t) != ("op", ")"):
                    raise ValueError(f"unclosed {tok}(...)")
                return _UnOp(tok, inner)
            raise ValueError(f"unknown reward leaf {tok!r}")
        if (kind, tok) == ("op", "("):
            inner = parse_sum()
            k, t = take()
            if (k, t) != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return inner
        raise ValueError(f"unexpected token {tok!r}" if tok else "empty reward expression")

    node = parse_sum()
    if idx[0] != len(tokens):
        raise ValueError(f"trailing tokens in reward expression: {tokens[idx[0]:]}")
    return node
