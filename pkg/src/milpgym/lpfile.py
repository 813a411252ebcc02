"""Reader and writer for a documented subset of the LP text format.

Supported layout (sections in this order when writing; the reader accepts
any section order after the objective):

    \\ name: <label>
    Minimize | Maximize
     obj: +3 x0 -1.5 x1
    Subject To
     c0: +1 x0 +1 x1 >= 1
    Bounds
     0 <= x0 <= 1
     x1 free
    General
     x2
    Binary
     x0
    End

Rules: one bound declaration per line; constraints may wrap lines and end at
their relation + right-hand side; `<` and `>` mean `<=` and `>=`; numbers in
plain or scientific notation; `inf`/`infinity` with optional sign in bounds.
Variables default to [0, +inf) continuous; `Binary` implies bounds [0, 1]
unless explicit bounds were given. Maximization is stored negated with the
original sense recorded on the Problem. Quadratic terms (`^`, `[`), SOS
sections, and indicator constraints (`->`) are rejected as unsupported.

Coefficients are written as shortest round-trip decimals (integral values
without a trailing `.0`), so write -> read reproduces every double exactly.
"""

import re

import numpy as np

from .errors import LpParseError, UnsupportedLpFeatureError
from .problem import Constraint, Problem, Relation

_SECTIONS = {
    "minimize": "objective_min",
    "min": "objective_min",
    "maximize": "objective_max",
    "max": "objective_max",
    "subject to": "constraints",
    "such that": "constraints",
    "st": "constraints",
    "s.t.": "constraints",
    "bounds": "bounds",
    "bound": "bounds",
    "general": "general",
    "generals": "general",
    "gen": "general",
    "integer": "general",
    "integers": "general",
    "binary": "binary",
    "binaries": "binary",
    "bin": "binary",
    "end": "end",
}

_UNSUPPORTED_SECTIONS = ("sos", "sos1", "sos2", "semi-continuous", "semis", "semi")

_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_.]*)"
    r"|(?P<rel><=|>=|=<|=>|<|>|=)"
    r"|(?P<op>[+\-*:])"
    r"|(?P<bad>\S)"
)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text_line, line_no):
    toks = []
    for m in _TOKEN_RE.finditer(text_line):
        kind = m.lastgroup
        tok = m.group()
        col = m.start() + 1
        if kind == "bad":
            if tok == "^":
                raise UnsupportedLpFeatureError("quadratic term (^)", line_no, col)
            if tok in "[]":
                raise UnsupportedLpFeatureError("quadratic bracket section", line_no, col)
            raise LpParseError(f"unexpected character {tok!r}", line_no, col)
        toks.append(_Tok(kind, tok, line_no, col))
    return toks


def _parse_terms(toks, var_of, stop_at_rel=False):
    """Consume `[label:] (sign? coef? var)+` and return ([(j, coef)], rest).

    When stop_at_rel is set, parsing stops cleanly at a relation token so the
    caller can read the right-hand side; otherwise relations are an error.
    """
    i = 0
    if len(toks) >= 2 and toks[0].kind == "name" and toks[1].text == ":":
        i = 2
    terms = []
    sign = 1.0
    coef = None
    while i < len(toks):
        t = toks[i]
        if t.kind == "rel":
            if stop_at_rel:
                break
            raise LpParseError("unexpected relation", t.line, t.col)
        if t.kind == "op":
            if t.text == "+":
                pass
            elif t.text == "-":
                sign = -sign
            elif t.text == "*":
                if coef is None:
                    raise LpParseError("'*' without coefficient", t.line, t.col)
            else:
                raise LpParseError(f"unexpected {t.text!r}", t.line, t.col)
            i += 1
            continue
        if t.kind == "num":
            if coef is not None:
                raise LpParseError("two numbers in a row", t.line, t.col)
            coef = sign * float(t.text)
            sign = 1.0
            i += 1
            continue
        # name token: one term ends here
        value = coef if coef is not None else sign
        if coef is None:
            sign = 1.0
        terms.append((var_of(t), value))
        coef = None
        i += 1
    if coef is not None:
        t = toks[i] if i < len(toks) else toks[-1]
        raise LpParseError("constant term without variable", t.line, t.col)
    return terms, toks[i:]


def _parse_value(toks):
    """Parse `sign? (number | inf | infinity)`; returns (value, rest)."""
    sign = 1.0
    i = 0
    while i < len(toks) and toks[i].kind == "op" and toks[i].text in "+-":
        if toks[i].text == "-":
            sign = -sign
        i += 1
    if i >= len(toks):
        last = toks[-1] if toks else _Tok("num", "", 0, 0)
        raise LpParseError("expected a number", last.line, last.col)
    t = toks[i]
    if t.kind == "num":
        return sign * float(t.text), toks[i + 1 :]
    if t.kind == "name" and t.text.lower() in ("inf", "infinity"):
        return sign * np.inf, toks[i + 1 :]
    raise LpParseError(f"expected a number, got {t.text!r}", t.line, t.col)


def _parse_bound_line(toks, var_of, explicit_bounds, line_no):
    if not toks:
        return
    # form: <var> free
    if (
        len(toks) == 2
        and toks[0].kind == "name"
        and toks[1].kind == "name"
        and toks[1].text.lower() == "free"
    ):
        explicit_bounds[var_of(toks[0])] = (-np.inf, np.inf)
        return

    def rel_dir(t):
        if t.kind != "rel":
            raise LpParseError("expected <=, >= or = in bounds", t.line, t.col)
        return _relation_of(t)

    if toks[0].kind == "name":
        # var REL value
        j = var_of(toks[0])
        rel = rel_dir(toks[1])
        value, rest = _parse_value(toks[2:])
        if rest:
            raise LpParseError("trailing tokens in bound", rest[0].line, rest[0].col)
        lo, up = explicit_bounds.get(j, (0.0, np.inf))
        if rel is Relation.LE:
            explicit_bounds[j] = (lo, value)
        elif rel is Relation.GE:
            explicit_bounds[j] = (value, up)
        else:
            explicit_bounds[j] = (value, value)
        return

    # value REL var [REL value]
    value, rest = _parse_value(toks)
    if not rest:
        raise LpParseError("incomplete bound", line_no, 1)
    rel = rel_dir(rest[0])
    if len(rest) < 2 or rest[1].kind != "name":
        raise LpParseError("expected variable name in bound", rest[0].line, rest[0].col)
    j = var_of(rest[1])
    lo, up = explicit_bounds.get(j, (0.0, np.inf))
    if rel is Relation.LE:
        lo = value
    elif rel is Relation.GE:
        up = value
    else:
        lo = up = value
    rest = rest[2:]
    if rest:
        rel2 = rel_dir(rest[0])
        value2, rest = _parse_value(rest[1:])
        if rest:
            raise LpParseError("trailing tokens in bound", rest[0].line, rest[0].col)
        if rel2 is Relation.LE:
            up = value2
        elif rel2 is Relation.GE:
            lo = value2
        else:
            raise LpParseError("'=' not allowed in a range bound", toks[0].line, toks[0].col)
    explicit_bounds[j] = (lo, up)


def _relation_of(tok):
    if tok.text in ("<=", "<", "=<"):
        return Relation.LE
    if tok.text in (">=", ">", "=>"):
        return Relation.GE
    return Relation.EQ


def read_lp_text(text, name=None):
    """Parse LP text into a Problem. Raises LpParseError on bad input."""
    lines = []
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("\\", 1)[0]
        if "->" in body:
            raise UnsupportedLpFeatureError("indicator constraint (->)", i, body.index("->") + 1)
        if "\\" in raw and name is None:
            comment = raw.split("\\", 1)[1].strip()
            if comment.lower().startswith("name:"):
                name = comment[5:].strip()
        lines.append((i, body))

    sections = []  # (kind, [(line_no, tokens)])
    current = None
    for line_no, body in lines:
        stripped = body.strip().lower()
        if stripped in _SECTIONS:
            if _SECTIONS[stripped] == "end":
                break
            current = (_SECTIONS[stripped], [])
            sections.append(current)
            continue
        if stripped in _UNSUPPORTED_SECTIONS:
            raise UnsupportedLpFeatureError(f"{stripped} section", line_no, 1)
        if not stripped:
            continue
        if current is None:
            raise LpParseError("content before objective section", line_no, 1)
        current[1].append((line_no, _tokenize(body, line_no)))

    if not sections or not sections[0][0].startswith("objective"):
        raise LpParseError("missing objective section", 1, 1)

    var_index = {}
    var_order = []

    def var_of(tok):
        if tok.kind != "name":
            raise LpParseError(f"expected variable name, got {tok.text!r}", tok.line, tok.col)
        if tok.text not in var_index:
            var_index[tok.text] = len(var_order)
            var_order.append(tok.text)
        return var_index[tok.text]

    maximize = sections[0][0] == "objective_max"
    obj_terms = {}
    rows = []
    explicit_bounds = {}
    integer_vars = set()
    binary_vars = set()

    for kind, content in sections:
        toks = [t for _, line_toks in content for t in line_toks]
        if kind.startswith("objective"):
            terms, rest = _parse_terms(toks, var_of)
            if rest:
                raise LpParseError("trailing tokens after objective", rest[0].line, rest[0].col)
            for j, c in terms:
                obj_terms[j] = obj_terms.get(j, 0.0) + c
        elif kind == "constraints":
            rest = toks
            while rest:
                terms, rest = _parse_terms(rest, var_of, stop_at_rel=True)
                if not rest or rest[0].kind != "rel":
                    where = rest[0] if rest else toks[-1]
                    raise LpParseError("constraint missing relation", where.line, where.col)
                rel_tok = rest[0]
                rhs, rest = _parse_value(rest[1:])
                if not terms:
                    raise LpParseError("constraint has no variables", rel_tok.line, rel_tok.col)
                merged = {}
                order = []
                for j, c in terms:
                    if j not in merged:
                        merged[j] = 0.0
                        order.append(j)
                    merged[j] += c
                rows.append(
                    Constraint(
                        indices=np.array(order, dtype=np.int64),
                        coefs=np.array([merged[j] for j in order]),
                        relation=_relation_of(rel_tok),
                        rhs=rhs,
                    )
                )
        elif kind == "bounds":
            for line_no, line_toks in content:
                _parse_bound_line(line_toks, var_of, explicit_bounds, line_no)
        elif kind == "general":
            for _, line_toks in content:
                for t in line_toks:
                    integer_vars.add(var_of(t))
        elif kind == "binary":
            for _, line_toks in content:
                for t in line_toks:
                    binary_vars.add(var_of(t))

    n = len(var_order)
    objective = np.zeros(n)
    for j, c in obj_terms.items():
        objective[j] = c
    if maximize:
        objective = -objective
    lower = np.zeros(n)
    upper = np.full(n, np.inf)
    for j in binary_vars:
        if j not in explicit_bounds:
            explicit_bounds[j] = (0.0, 1.0)
    for j, (lo, up) in explicit_bounds.items():
        lower[j] = lo
        upper[j] = up
    is_integer = np.zeros(n, dtype=bool)
    for j in integer_vars | binary_vars:
        is_integer[j] = True

    return Problem(
        name=name or "",
        objective=objective,
        lower=lower,
        upper=upper,
        is_integer=is_integer,
        rows=rows,
        maximize=maximize,
    )


def read_lp_file(path):
    with open(path, encoding="utf-8") as fh:
        return read_lp_text(fh.read())


def _fmt(value):
    """Shortest decimal that round-trips; integral values without '.0'."""
    if value == np.inf:
        return "+inf"
    if value == -np.inf:
        return "-inf"
    f = float(value)
    if f == int(f) and abs(f) < 1e16:
        return str(int(f))
    return repr(f)


def _terms_text(indices, coefs):
    parts = []
    for j, c in zip(indices, coefs):
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign}{_fmt(abs(c))} x{j}")
    return " ".join(parts)


def write_lp_text(problem):
    """Render a Problem as LP text.

    Every variable appears in the objective (zero coefficients included) so
    the variable order is pinned and read_lp_text(write_lp_text(p)) == p.
    """
    obj = -problem.objective if problem.maximize else problem.objective
    out = []
    if problem.name:
        out.append(f"\\ name: {problem.name}")
    out.append("Maximize" if problem.maximize else "Minimize")
    out.append(" obj: " + _terms_text(range(problem.num_vars), obj))
    out.append("Subject To")
    for i, row in enumerate(problem.rows):
        out.append(f" c{i}: {_terms_text(row.indices, row.coefs)} {row.relation.value} {_fmt(row.rhs)}")
    out.append("Bounds")
    for j in range(problem.num_vars):
        lo, up = problem.lower[j], problem.upper[j]
        if lo == -np.inf and up == np.inf:
            out.append(f" x{j} free")
        elif lo == up:
            out.append(f" x{j} = {_fmt(lo)}")
        else:
            out.append(f" {_fmt(lo)} <= x{j} <= {_fmt(up)}")
    general = [j for j in range(problem.num_vars) if problem.is_integer[j] and not _is_binary(problem, j)]
    binary = [j for j in range(problem.num_vars) if problem.is_integer[j] and _is_binary(problem, j)]
    if general:
        out.append("General")
        out.append(" " + " ".join(f"x{j}" for j in general))
    if binary:
        out.append("Binary")
        out.append(" " + " ".join(f"x{j}" for j in binary))
    out.append("End")
    return "\n".join(out) + "\n"


def _is_binary(problem, j):
    return problem.lower[j] == 0.0 and problem.upper[j] == 1.0


def write_lp_file(problem, path):
    """Write LP text with fixed newlines so output bytes are reproducible."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(write_lp_text(problem))
