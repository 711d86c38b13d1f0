"""Exact linear programming over the rationals.

A dense two-phase primal simplex with Bland's rule: slow by floating-point
standards, immune to cycling and to rounding.  Problem sizes in this package
stay tiny (dimension <= 8, a few dozen rows), so clarity wins over sparsity.

Inequalities are (a, b) pairs meaning a @ x <= b; equalities mean a @ x == b.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import Vec, dot

try:  # exact C-speed rationals when available; plain Fractions otherwise
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

Row = tuple[Vec, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)
_QZERO = _Q(0)
_QONE = _Q(1)


def _to_fraction(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


class _Tableau:
    """Simplex tableau in equality standard form with nonnegative variables.

    Scalars are gmpy2.mpq when available (exact, much faster) and Fractions
    otherwise; only `solve` converts at the boundary.
    """

    def __init__(self, rows: list[list], rhs: list):
        self.rows = rows
        self.rhs = rhs
        self.m = len(rows)
        self.n = len(rows[0]) if rows else 0
        self.basis: list[int] = []
        self.cost: list = []
        self.cost_rhs = _QZERO

    def set_objective(self, c: list) -> None:
        # reduced-cost row for the current basis: r = c - c_B . B^-1 A
        # cost_rhs stores -objective (tableau convention; row ops keep it so)
        cost = list(c)
        rhs = _QZERO
        for i, bj in enumerate(self.basis):
            cb = c[bj]
            if cb:
                row = self.rows[i]
                for j in range(self.n):
                    if row[j]:
                        cost[j] -= cb * row[j]
                rhs -= cb * self.rhs[i]
        self.cost = cost
        self.cost_rhs = rhs

    @property
    def objective_value(self) -> Fraction:
        return -self.cost_rhs

    def pivot(self, i: int, j: int) -> None:
        piv = self.rows[i][j]
        inv = 1 / piv
        self.rows[i] = [x * inv if x else x for x in self.rows[i]]
        self.rhs[i] *= inv
        prow = self.rows[i]
        prhs = self.rhs[i]
        for k in range(self.m):
            if k != i:
                f = self.rows[k][j]
                if f:
                    self.rows[k] = [
                        x - f * y if y else x for x, y in zip(self.rows[k], prow)
                    ]
                    self.rhs[k] -= f * prhs
        f = self.cost[j]
        if f:
            self.cost = [x - f * y if y else x for x, y in zip(self.cost, prow)]
            self.cost_rhs -= f * prhs
        self.basis[i] = j

    def run(self, allowed: list[bool]) -> str:
        """Maximize until optimal/unbounded, entering only `allowed` columns."""
        while True:
            j = next(
                (k for k in range(self.n) if allowed[k] and self.cost[k] > 0), None
            )
            if j is None:
                return OPTIMAL
            best = None
            for i in range(self.m):
                a = self.rows[i][j]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], j)


def solve(
    c: Vec,
    ineqs: list[Row],
    eqs: list[Row],
    dim: int,
    maximize: bool = True,
) -> tuple[str, Vec | None, Fraction | None]:
    """Optimize c @ x subject to the rows; returns (status, point, value)."""
    obj = [_Q(x) for x in c] if maximize else [-_Q(x) for x in c]
    # columns: x+ (dim) | x- (dim) | slacks (#ineqs) | artificials (#rows)
    n_slack = len(ineqs)
    m = len(ineqs) + len(eqs)
    if dim == 0:
        ok = all(b >= 0 for _, b in ineqs) and all(b == 0 for _, b in eqs)
        if not ok:
            return INFEASIBLE, None, None
        return OPTIMAL, (), _ZERO
    if m == 0:
        # unconstrained: optimum is 0 at the origin unless the objective is nonzero
        if all(x == 0 for x in obj):
            return OPTIMAL, tuple(_ZERO for _ in range(dim)), _ZERO
        return UNBOUNDED, None, None
    width = 2 * dim + n_slack + m
    rows: list[list] = []
    rhs: list = []
    all_rows = [(a, b, True) for a, b in ineqs] + [(a, b, False) for a, b in eqs]
    for r, (a, b, is_ineq) in enumerate(all_rows):
        row = [_QZERO] * width
        sgn = 1 if b >= 0 else -1
        for j in range(dim):
            q = _Q(a[j]) if sgn == 1 else -_Q(a[j])
            row[j] = q
            row[dim + j] = -q
        if is_ineq:
            row[2 * dim + r] = _Q(sgn)
        row[2 * dim + n_slack + r] = _QONE
        rows.append(row)
        rhs.append(_Q(b) if sgn == 1 else -_Q(b))
    tab = _Tableau(rows, rhs)
    tab.basis = [2 * dim + n_slack + r for r in range(m)]

    # phase 1: drive the artificials to zero
    phase1 = [_QZERO] * width
    for r in range(m):
        phase1[2 * dim + n_slack + r] = -_QONE
    tab.set_objective(phase1)
    allowed = [True] * width
    tab.run(allowed)
    if tab.objective_value != 0:
        return INFEASIBLE, None, None
    # pivot basic artificials out; a row that cannot pivot is redundant
    art_start = 2 * dim + n_slack
    for i in range(m):
        if tab.basis[i] >= art_start and tab.rhs[i] == 0:
            j = next(
                (k for k in range(art_start) if tab.rows[i][k] != 0), None
            )
            if j is not None:
                tab.pivot(i, j)

    # phase 2
    phase2 = [_QZERO] * width
    for j in range(dim):
        phase2[j] = obj[j]
        phase2[dim + j] = -obj[j]
    tab.set_objective(phase2)
    allowed = [True] * art_start + [False] * m
    status = tab.run(allowed)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None
    x = [_QZERO] * dim
    for i, bj in enumerate(tab.basis):
        if bj < dim:
            x[bj] += tab.rhs[i]
        elif bj < 2 * dim:
            x[bj - dim] -= tab.rhs[i]
    point = tuple(_to_fraction(v) for v in x)
    value = dot(c, point)
    return OPTIMAL, point, value


def feasible_point(ineqs: list[Row], eqs: list[Row], dim: int) -> Vec | None:
    status, x, _ = solve(tuple(_ZERO for _ in range(dim)), ineqs, eqs, dim)
    return x if status == OPTIMAL else None


def strict_feasible_point(
    ineqs: list[Row],
    strict: list[Row],
    eqs: list[Row],
    dim: int,
) -> Vec | None:
    """A point satisfying `strict` rows strictly and the rest weakly.

    Solves max t <= 1 with a @ x + t <= b on the strict rows; the optimum is
    positive exactly when the mixed system is solvable, and the returned point
    maximizes the worst strict slack (a deterministic relative-interior pick).
    """
    lift_ineqs: list[Row] = [(a + (_ZERO,), b) for a, b in ineqs]
    for a, b in strict:
        lift_ineqs.append((a + (_ONE,), b))
    lift_ineqs.append(((_ZERO,) * dim + (_ONE,), _ONE))
    lift_eqs: list[Row] = [(a + (_ZERO,), b) for a, b in eqs]
    t_obj = (_ZERO,) * dim + (_ONE,)
    status, x, value = solve(t_obj, lift_ineqs, lift_eqs, dim + 1)
    if status != OPTIMAL or value is None or value <= 0:
        return None
    assert x is not None
    return x[:dim]


def optimum(
    c: Vec, ineqs: list[Row], eqs: list[Row], dim: int, maximize: bool = True
) -> tuple[str, Vec | None, Fraction | None]:
    return solve(c, ineqs, eqs, dim, maximize=maximize)
