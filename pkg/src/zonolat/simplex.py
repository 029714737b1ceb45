"""Exact two-phase simplex over rationals with Bland's pivoting rule.

Minimizes c.x subject to equality constraints A x = b, per-variable lower
bounds of 0 or -infinity, and upper bounds of +infinity or a finite
rational.  All arithmetic is fractions.Fraction, so optimality,
infeasibility and unboundedness are decided exactly, and identical inputs
always produce the identical pivot sequence and vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import solve_linear_system
from .errors import DimensionError, InternalInvariantError, InvalidInputError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPProblem:
    """min c.x  s.t.  A x = b,  lower <= x <= upper.

    lower entries are Fraction(0) or None (-infinity); upper entries are a
    finite Fraction or None (+infinity).
    """

    c: tuple[Fraction, ...]
    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    lower: tuple[Fraction | None, ...]
    upper: tuple[Fraction | None, ...]

    def __post_init__(self):
        n = len(self.c)
        if any(len(row) != n for row in self.A):
            raise DimensionError("constraint row length does not match objective")
        if len(self.b) != len(self.A):
            raise DimensionError("right-hand side length does not match row count")
        if len(self.lower) != n or len(self.upper) != n:
            raise DimensionError("bound vectors must match the variable count")
        for lo in self.lower:
            if lo is not None and lo != 0:
                raise InvalidInputError("lower bounds are restricted to 0 or None")
        for lo, up in zip(self.lower, self.upper):
            if up is not None and lo is not None and up < lo:
                raise InvalidInputError("upper bound below lower bound")


@dataclass(frozen=True)
class LPResult:
    status: str
    optimum: Fraction | None
    vertex: tuple[Fraction, ...] | None


def lp_problem(c: Iterable, A: Iterable[Iterable], b: Iterable,
               lower: Sequence | None = None,
               upper: Sequence | None = None) -> LPProblem:
    """Convenience constructor; defaults are x >= 0 with no upper bounds."""
    cv = tuple(Fraction(x) for x in c)
    av = tuple(tuple(Fraction(x) for x in row) for row in A)
    bv = tuple(Fraction(x) for x in b)
    n = len(cv)
    lov = (tuple(None if x is None else Fraction(x) for x in lower)
           if lower is not None else (Fraction(0),) * n)
    upv = (tuple(None if x is None else Fraction(x) for x in upper)
           if upper is not None else (None,) * n)
    return LPProblem(c=cv, A=av, b=bv, lower=lov, upper=upv)


def solve_lp(p: LPProblem) -> LPResult:
    """Exact optimum and basic optimal vertex via two-phase Bland simplex."""
    std, col_of = _to_standard_form(p)
    res = _simplex_standard(*std)
    if res[0] != OPTIMAL:
        return LPResult(status=res[0], optimum=None, vertex=None)
    _, opt, x = res
    vertex = []
    for pos, neg in col_of:
        val = x[pos]
        if neg is not None:
            val = val - x[neg]
        vertex.append(val)
    return LPResult(status=OPTIMAL, optimum=opt, vertex=tuple(vertex))


def solve_with_fixed_zero(p: LPProblem, fixed: Iterable[int]) -> LPResult:
    """Solve p with x_i = 0 imposed for every i in `fixed`.

    Implemented by dropping the fixed columns; the returned vertex is
    re-expanded with exact zeros at the fixed positions.
    """
    fixed_set = set(fixed)
    n = len(p.c)
    if any(i < 0 or i >= n for i in fixed_set):
        raise InvalidInputError("fixed index out of range")
    keep = [j for j in range(n) if j not in fixed_set]
    q = LPProblem(
        c=tuple(p.c[j] for j in keep),
        A=tuple(tuple(row[j] for j in keep) for row in p.A),
        b=p.b,
        lower=tuple(p.lower[j] for j in keep),
        upper=tuple(p.upper[j] for j in keep),
    )
    r = solve_lp(q)
    if r.status != OPTIMAL:
        return r
    full = [Fraction(0)] * n
    for j, val in zip(keep, r.vertex):
        full[j] = val
    return LPResult(status=OPTIMAL, optimum=r.optimum, vertex=tuple(full))


# ---------------------------------------------------------------------------
# Standard-form conversion
# ---------------------------------------------------------------------------


def _to_standard_form(p: LPProblem):
    """Rewrite as min c.y, A y = b, y >= 0.

    Free variables split into a difference of two nonnegative columns;
    finite upper bounds become extra rows with a slack column.
    """
    cols: list[list[Fraction]] = []
    c_std: list[Fraction] = []
    col_of: list[tuple[int, int | None]] = []
    nrows = len(p.A)
    ups: list[tuple[int, Fraction]] = [
        (j, u) for j, u in enumerate(p.upper) if u is not None
    ]
    total_rows = nrows + len(ups)

    def new_col(obj: Fraction, body: dict[int, Fraction]) -> int:
        col = [Fraction(0)] * total_rows
        for i, v in body.items():
            col[i] = v
        cols.append(col)
        c_std.append(obj)
        return len(cols) - 1

    up_row = {j: nrows + k for k, (j, _) in enumerate(ups)}
    for j in range(len(p.c)):
        body = {i: p.A[i][j] for i in range(nrows) if p.A[i][j]}
        if j in up_row:
            body[up_row[j]] = Fraction(1)
        pos = new_col(p.c[j], body)
        neg = None
        if p.lower[j] is None:
            neg = new_col(-p.c[j], {i: -v for i, v in body.items()})
        col_of.append((pos, neg))
    for j, _u in ups:
        new_col(Fraction(0), {up_row[j]: Fraction(1)})  # slack for x_j <= u
    b_std = list(p.b) + [u for _, u in ups]
    a_rows = [[cols[j][i] for j in range(len(cols))] for i in range(total_rows)]
    return (c_std, a_rows, b_std), col_of


# ---------------------------------------------------------------------------
# Core tableau simplex (min c.x, A x = b, x >= 0)
# ---------------------------------------------------------------------------


def _simplex_standard(c: list[Fraction], a: list[list[Fraction]],
                      b: list[Fraction]):
    nvar = len(c)
    rows = [list(r) for r in a]
    rhs = list(b)
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    m = len(rows)

    # tableau over columns [structural | artificial], artificial basis
    tab = [rows[i] + [Fraction(int(k == i)) for k in range(m)] for i in range(m)]
    basis = [nvar + i for i in range(m)]
    ncols = nvar + m

    # phase 1: minimize the sum of artificials
    red = [Fraction(0)] * ncols
    z = Fraction(0)
    for j in range(nvar):
        red[j] = -sum(tab[i][j] for i in range(m))
    z = -sum(rhs)

    def pivot(r: int, jc: int):
        nonlocal z
        pv = tab[r][jc]
        tab[r] = [x / pv for x in tab[r]]
        rhs[r] /= pv
        for i in range(len(tab)):
            if i != r and tab[i][jc]:
                f = tab[i][jc]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
                rhs[i] -= f * rhs[r]
        if red[jc]:
            f = red[jc]
            for j in range(ncols):
                red[j] -= f * tab[r][j]
            z -= f * rhs[r]
        basis[r] = jc

    def bland(allowed: int) -> str:
        while True:
            enter = next((j for j in range(allowed) if red[j] < 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i in range(len(tab)):
                if tab[i][enter] > 0:
                    ratio = rhs[i] / tab[i][enter]
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            pivot(best[1], enter)

    status = bland(ncols)
    if status != OPTIMAL:
        raise InternalInvariantError("phase-1 objective is bounded by zero")
    if z != 0:
        return (INFEASIBLE,)

    # drive artificial variables out of the basis; drop redundant rows
    for i in range(len(tab) - 1, -1, -1):
        if basis[i] >= nvar:
            enter = next((j for j in range(nvar) if tab[i][j] != 0), None)
            if enter is None:
                del tab[i], rhs[i], basis[i]
            else:
                pivot(i, enter)

    # phase 2 over structural columns only
    for i in range(len(tab)):
        tab[i] = tab[i][:nvar]
    ncols = nvar
    red = list(c)
    z = Fraction(0)
    for i, bi in enumerate(basis):
        if c[bi]:
            f = c[bi]
            for j in range(nvar):
                red[j] -= f * tab[i][j]
            z -= f * rhs[i]
    status = bland(nvar)
    if status == UNBOUNDED:
        return (UNBOUNDED,)

    x = [Fraction(0)] * nvar
    for i, bi in enumerate(basis):
        x[bi] = rhs[i]
    opt = sum((ci * xi for ci, xi in zip(c, x) if ci and xi), Fraction(0))
    _certify_optimal(c, a, b, basis, x, opt)
    return (OPTIMAL, opt, x)


def _certify_optimal(c, a, b, basis, x, opt):
    """Strong-duality self check: reconstruct duals and verify exactly."""
    rows_used = _independent_rows(a, basis)
    bt = [[Fraction(a[i][j]) for i in rows_used] for j in basis]
    cb = [c[j] for j in basis]
    try:
        y = solve_linear_system(
            [[bt[r][s] for s in range(len(rows_used))] for r in range(len(basis))],
            cb,
        )
    except InvalidInputError as exc:
        raise InternalInvariantError("optimal basis matrix is singular") from exc
    for j in range(len(c)):
        reduced = c[j] - sum(y[s] * a[i][j] for s, i in enumerate(rows_used))
        if reduced < 0:
            raise InternalInvariantError("duality check failed: negative reduced cost")
    dual_obj = sum(y[s] * b[i] for s, i in enumerate(rows_used))
    if dual_obj != opt:
        raise InternalInvariantError("duality check failed: objective mismatch")


def _independent_rows(a, basis) -> list[int]:
    """Pick rows making the basis columns square and nonsingular.

    Rows dropped as redundant during phase 1 must be skipped; greedy exact
    elimination over the basis columns selects an independent row set.
    """
    k = len(basis)
    work: list[tuple[list[Fraction], int]] = []
    chosen: list[int] = []
    for i in range(len(a)):
        row = [Fraction(a[i][j]) for j in basis]
        for prow, piv in work:
            if row[piv]:
                f = row[piv] / prow[piv]
                row = [x - f * y for x, y in zip(row, prow)]
        piv = next((j for j in range(k) if row[j] != 0), None)
        if piv is not None:
            work.append((row, piv))
            chosen.append(i)
            if len(chosen) == k:
                break
    if len(chosen) != k:
        raise InternalInvariantError("could not select independent rows for duality")
    return chosen
