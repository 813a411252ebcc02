"""Bounded-variable primal simplex with a two-phase start.

The solver works on the equality form A x + s = b where one slack s_i is
attached to every row (range of the slack encodes the relation: [0, inf)
for <=, (-inf, 0] for >=, [0, 0] for =). When the initial slack basis is
out of range, explicit artificial columns are added and phase 1 minimizes
their sum before the real objective takes over.

Numerics are deliberately plain: a dense basis inverse updated by rank-one
eta transformations, recomputed from scratch every 50 pivots, Dantzig
pricing with a switch to Bland's rule after 100 consecutive degenerate
steps. No warm starts, no scaling, no perturbation; every solve from the
same inputs replays the identical pivot sequence, so results are bitwise
reproducible.
"""

from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

from .errors import SimplexFailureError
from .problem import Relation

FEAS_TOL = 1e-7
OPT_TOL = 1e-7

_PIVOT_TOL = 1e-10
_RATIO_TIE_TOL = 1e-9
_REFACTOR_EVERY = 50
_STALL_LIMIT = 100

# internal variable states
_BASIC, _AT_LO, _AT_UP, _FREE = 0, 1, 2, 3


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


class BasisStatus(IntEnum):
    BASIC = 0
    AT_LOWER = 1
    AT_UPPER = 2


@dataclass
class LpResult:
    status: LpStatus
    objective: float = None
    x: np.ndarray = None
    duals: np.ndarray = None
    reduced_costs: np.ndarray = None
    var_status: np.ndarray = None  # BasisStatus per structural variable
    row_status: np.ndarray = None  # BasisStatus of each row's slack
    iterations: int = 0


class SimplexSolver:
    """Reusable solver for one Problem; bounds can differ per solve.

    Builds the dense column matrix [A | I_slack | artificials] once so a
    branch-and-bound search can re-solve the relaxation under tightened
    variable bounds without re-assembling anything.
    """

    def __init__(self, problem):
        n = problem.num_vars
        m = problem.num_cons
        self.n = n
        self.m = m
        self.c = problem.objective.astype(np.float64, copy=True)
        self.base_lower = problem.lower.copy()
        self.base_upper = problem.upper.copy()

        A = np.zeros((m, n))
        b = np.empty(m)
        slack_lo = np.empty(m)
        slack_up = np.empty(m)
        for i, row in enumerate(problem.rows):
            A[i, row.indices] = row.coefs
            b[i] = row.rhs
            if row.relation is Relation.LE:
                slack_lo[i], slack_up[i] = 0.0, np.inf
            elif row.relation is Relation.GE:
                slack_lo[i], slack_up[i] = -np.inf, 0.0
            else:
                slack_lo[i], slack_up[i] = 0.0, 0.0
        self.A = A
        self.b = b
        self.slack_lo = slack_lo
        self.slack_up = slack_up

        full = np.zeros((m, n + 2 * m))
        full[:, :n] = A
        full[np.arange(m), n + np.arange(m)] = 1.0
        self.A_full = full
        self._art_cols = n + m + np.arange(m)

    def solve(self, lower=None, upper=None, max_iterations=100000):
        n, m = self.n, self.m
        N = n + 2 * m
        lo = np.empty(N)
        up = np.empty(N)
        lo[:n] = self.base_lower if lower is None else lower
        up[:n] = self.base_upper if upper is None else upper
        lo[n : n + m] = self.slack_lo
        up[n : n + m] = self.slack_up
        lo[n + m :] = 0.0
        up[n + m :] = 0.0

        if np.any(lo[:n] > up[:n]):
            # crossed bounds cannot host any point; callers rely on this
            # short-circuit when branching fixes a variable both ways
            return LpResult(status=LpStatus.INFEASIBLE)

        xval = np.zeros(N)
        vstat = np.empty(N, dtype=np.int8)
        fin_lo = np.isfinite(lo[:n])
        fin_up = np.isfinite(up[:n])
        xval[:n] = np.where(fin_lo, lo[:n], np.where(fin_up, up[:n], 0.0))
        vstat[:n] = np.where(fin_lo, _AT_LO, np.where(fin_up, _AT_UP, _FREE))
        vstat[n:] = _AT_LO

        residual = self.b - self.A @ xval[:n] if n else self.b.copy()
        slack_val = np.clip(residual, lo[n : n + m], up[n : n + m])
        leftover = residual - slack_val
        need_art = np.abs(leftover) > 1e-11

        basis = np.where(need_art, self._art_cols, n + np.arange(m))
        signs = np.where(need_art, np.sign(leftover), 0.0)
        self.A_full[np.arange(m), self._art_cols] = signs

        xval[n : n + m] = np.where(need_art, slack_val, residual)
        vstat[n : n + m] = np.where(
            need_art,
            np.where(slack_val == lo[n : n + m], _AT_LO, _AT_UP),
            _BASIC,
        )
        xval[n + m :] = np.where(need_art, np.abs(leftover), 0.0)
        vstat[self._art_cols[need_art]] = _BASIC
        up[self._art_cols[need_art]] = np.inf

        binv = np.diag(np.where(need_art, signs, 1.0))

        c_real = np.zeros(N)
        c_real[:n] = self.c
        c_art = np.zeros(N)
        c_art[n + m :] = np.where(need_art, 1.0, 0.0)

        phase = 1 if need_art.any() else 2
        c = c_art if phase == 1 else c_real
        iters = 0
        stall = 0
        bland = False
        since_refactor = 0

        def refactor():
            nonlocal binv, since_refactor
            try:
                binv = np.linalg.inv(self.A_full[:, basis])
            except np.linalg.LinAlgError:
                raise SimplexFailureError("singular basis during refactorization") from None
            tmp = xval.copy()
            tmp[basis] = 0.0
            xval[basis] = binv @ (self.b - self.A_full @ tmp)
            since_refactor = 0

        while True:
            if iters >= max_iterations:
                return LpResult(status=LpStatus.ITERATION_LIMIT, iterations=iters)

            y = c[basis] @ binv if m else np.zeros(0)
            d = c - y @ self.A_full if m else c.copy()

            openb = lo < up
            elig = (
                ((vstat == _AT_LO) & openb & (d < -OPT_TOL))
                | ((vstat == _AT_UP) & openb & (d > OPT_TOL))
                | ((vstat == _FREE) & (np.abs(d) > OPT_TOL))
            )
            if not elig.any():
                if phase == 1:
                    infeas = float(xval[n + m :].sum())
                    if infeas > FEAS_TOL * max(1.0, float(np.abs(self.b).max(initial=0.0))):
                        return LpResult(status=LpStatus.INFEASIBLE, iterations=iters)
                    self._kick_out_artificials(basis, vstat, xval, binv)
                    up[n + m :] = 0.0
                    phase = 2
                    c = c_real
                    continue
                return self._extract(xval, vstat, basis, binv, iters, lo, up)

            if bland:
                q = int(np.nonzero(elig)[0][0])
            else:
                viol = np.where(elig, np.abs(d), 0.0)
                q = int(np.argmax(viol))

            dirn = 1.0 if (vstat[q] == _AT_LO or (vstat[q] == _FREE and d[q] < 0)) else -1.0
            w = binv @ self.A_full[:, q]
            delta = -dirn * w

            x_b = xval[basis]
            lo_b = lo[basis]
            up_b = up[basis]
            tvals = np.full(m, np.inf)
            dec = delta < -_PIVOT_TOL
            inc = delta > _PIVOT_TOL
            tvals[dec] = (x_b[dec] - lo_b[dec]) / -delta[dec]
            tvals[inc] = (up_b[inc] - x_b[inc]) / delta[inc]
            np.maximum(tvals, 0.0, out=tvals)

            t_basic = float(tvals.min()) if m else np.inf
            t_flip = up[q] - lo[q]
            if not np.isfinite(min(t_basic, t_flip)):
                if phase == 1:
                    raise SimplexFailureError("phase-1 objective unbounded")
                return LpResult(status=LpStatus.UNBOUNDED, iterations=iters)

            iters += 1

            if t_flip <= t_basic:
                # entering variable runs to its opposite bound; basis unchanged
                xval[basis] = x_b + delta * t_flip
                xval[q] = up[q] if vstat[q] == _AT_LO else lo[q]
                vstat[q] = _AT_UP if vstat[q] == _AT_LO else _AT_LO
                stall = 0
                bland = False
                continue

            cand = np.nonzero(tvals <= t_basic + _RATIO_TIE_TOL)[0]
            if bland:
                r = cand[np.argmin(basis[cand])]
            else:
                mags = np.abs(delta[cand])
                strong = cand[mags >= mags.max() - 1e-12]
                r = strong[np.argmin(basis[strong])]
            r = int(r)

            xval[basis] = x_b + delta * t_basic
            xval[q] = xval[q] + dirn * t_basic
            leaving = int(basis[r])
            if delta[r] < 0:
                vstat[leaving] = _AT_LO
                xval[leaving] = lo[leaving]
            else:
                vstat[leaving] = _AT_UP
                xval[leaving] = up[leaving]
            vstat[q] = _BASIC
            basis[r] = q

            pivot = w[r]
            row = binv[r] / pivot
            binv -= np.outer(w, row)
            binv[r] = row
            since_refactor += 1
            if since_refactor >= _REFACTOR_EVERY:
                refactor()

            if t_basic <= _RATIO_TIE_TOL:
                stall += 1
                if stall >= _STALL_LIMIT:
                    bland = True
            else:
                stall = 0
                bland = False

    def _kick_out_artificials(self, basis, vstat, xval, binv):
        """Swap zero-valued basic artificials for real columns where possible.

        A row whose artificial cannot be displaced is linearly dependent on
        the others; its artificial stays basic at zero, pinned by its [0, 0]
        bounds in phase 2.
        """
        n, m = self.n, self.m
        for r in np.nonzero(basis >= n + m)[0]:
            alpha = binv[r] @ self.A_full[:, : n + m]
            ok = (vstat[: n + m] != _BASIC) & (np.abs(alpha) > 1e-9)
            cands = np.nonzero(ok)[0]
            if cands.size == 0:
                continue
            q = int(cands[0])
            w = binv @ self.A_full[:, q]
            old = int(basis[r])
            vstat[old] = _AT_LO
            xval[old] = 0.0
            vstat[q] = _BASIC
            basis[r] = q
            row = binv[int(r)] / w[int(r)]
            binv -= np.outer(w, row)
            binv[int(r)] = row

    def _extract(self, xval, vstat, basis, binv, iters, lo, up):
        n, m = self.n, self.m
        x = xval[:n].copy()
        np.clip(x, lo[:n], up[:n], out=x)  # shave off sub-tolerance drift
        c_full = np.zeros(n + 2 * m)
        c_full[:n] = self.c
        y = c_full[basis] @ binv if m else np.zeros(0)
        reduced = self.c - y @ self.A if m else self.c.copy()
        status_map = np.array(
            [BasisStatus.BASIC, BasisStatus.AT_LOWER, BasisStatus.AT_UPPER, BasisStatus.AT_LOWER],
            dtype=np.int8,
        )
        return LpResult(
            status=LpStatus.OPTIMAL,
            objective=float(self.c @ x),
            x=x,
            duals=np.asarray(y, dtype=np.float64).copy(),
            reduced_costs=reduced,
            var_status=status_map[vstat[:n]],
            row_status=status_map[vstat[n : n + m]],
            iterations=iters,
        )


def solve_lp(problem, lower=None, upper=None, max_iterations=100000):
    """One-shot convenience wrapper around SimplexSolver."""
    return SimplexSolver(problem).solve(lower=lower, upper=upper, max_iterations=max_iterations)
