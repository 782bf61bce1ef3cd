"""Exact two-phase simplex over the rationals.

Core routine works on the standard form min c.x with A x = b, x >= 0,
using Bland's rule, so it terminates without cycling. A front end maps
free variables, inequality rows, and maximization onto standard form.
All arithmetic is exact; gmpy2 rationals are used when available purely
as a faster drop-in for Fraction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _to_fraction(v):
    # rebuild from plain ints so no mpz sneaks inside the Fraction
    return Fraction(int(v.numerator), int(v.denominator))


class LPResult(NamedTuple):
    status: str
    x: tuple
    value: object


def _pivot(T, basis, row, col):
    piv = T[row][col]
    T[row] = [x / piv for x in T[row]]
    prow = T[row]
    for i in range(len(T)):
        if i == row:
            continue
        f = T[i][col]
        if f:
            T[i] = [x - f * y for x, y in zip(T[i], prow)]
    basis[row] = col


def _price_out(T, basis, cost):
    """Reduced-cost row for the given objective over the current basis."""
    ncols = len(T[0])
    z = [_Q(x) for x in cost] + [_Q(0)]
    for i, bi in enumerate(basis):
        cb = cost[bi]
        if cb:
            z = [x - cb * y for x, y in zip(z, T[i])]
    return z[:ncols]


def _run_simplex(T, basis, zrow):
    """Minimize, in place. zrow has one extra slot holding minus the value."""
    ncols = len(T[0]) - 1
    while True:
        col = next((j for j in range(ncols) if zrow[j] < 0), None)
        if col is None:
            return OPTIMAL, zrow
        row = None
        best = None
        for i in range(len(T)):
            a = T[i][col]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[row]
                ):
                    best = ratio
                    row = i
        if row is None:
            return UNBOUNDED, zrow
        _pivot(T, basis, row, col)
        f = zrow[col]
        if f:
            zrow = [x - f * y for x, y in zip(zrow, T[row])]


def simplex_standard(A, b, c):
    """min c.x subject to A x = b, x >= 0.

    Returns (status, x, value, basis). The basis lists one column per
    row; x is the basic solution, a vertex of the feasible region.
    """
    m = len(A)
    n = len(A[0]) if m else len(c)
    if m == 0:
        if any(_Q(v) < 0 for v in c):
            return UNBOUNDED, None, None, None
        return OPTIMAL, [Fraction(0)] * n, Fraction(0), []
    T = []
    for i in range(m):
        row = [_Q(x) for x in A[i]]
        rhs = _Q(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        T.append(row + [rhs])
    # reuse unit columns as starting basis, add artificials elsewhere
    basis = [None] * m
    for j in range(n):
        hit = None
        ok = True
        for i in range(m):
            v = T[i][j]
            if v == 1 and hit is None:
                hit = i
            elif v:
                ok = False
                break
        if ok and hit is not None and basis[hit] is None:
            basis[hit] = j
    art_rows = [i for i in range(m) if basis[i] is None]
    ncols = n + len(art_rows)
    for k, i in enumerate(art_rows):
        basis[i] = n + k
    for i in range(m):
        rhs = T[i].pop()
        T[i].extend(_Q(0) for _ in art_rows)
        T[i].append(rhs)
    for k, i in enumerate(art_rows):
        T[i][n + k] = _Q(1)
    zrow = [_Q(0)] * (ncols + 1)
    for i in art_rows:
        zrow = [x - y for x, y in zip(zrow, T[i])]
    for k in range(len(art_rows)):
        zrow[n + k] = _Q(0)
    status, zrow = _run_simplex(T, basis, zrow)
    assert status == OPTIMAL, "phase 1 cannot be unbounded"
    if -zrow[-1] != 0:
        return INFEASIBLE, None, None, None
    # drive leftover artificials out of the basis, drop redundant rows
    drop = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j]), None)
            if col is None:
                drop.append(i)
            else:
                _pivot(T, basis, i, col)
    for i in reversed(drop):
        del T[i]
        del basis[i]
    T = [row[:n] + row[-1:] for row in T]
    # phase 2
    cost = [_Q(x) for x in c]
    zrow = _price_out(T, basis, cost)
    status, zrow = _run_simplex(T, basis, zrow)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None, None
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = _to_fraction(T[i][-1])
    return OPTIMAL, x, _to_fraction(-zrow[-1]), list(basis)


def solve_lp(nvars, objective=None, eq=(), ge=(), le=(), free=(), maximize=False):
    """Exact LP over nvars variables, non-negative unless listed in free.

    eq/ge/le are (coefficients, rhs) pairs. Returns an LPResult whose x
    is None unless the status is optimal.
    """
    free = set(free)
    # column layout: x_i, plus a negative copy for each free variable
    neg_col = {}
    ncols = nvars
    for i in sorted(free):
        neg_col[i] = ncols
        ncols += 1
    rows = []
    rhs = []

    def expand(coeffs):
        row = [_Q(0)] * ncols
        for i, v in enumerate(coeffs):
            if v:
                row[i] = _Q(v)
                if i in neg_col:
                    row[neg_col[i]] = -_Q(v)
        return row

    slack_count = sum(1 for _ in ge) + sum(1 for _ in le)
    total = ncols + slack_count
    srow = ncols
    for coeffs, b in eq:
        rows.append(expand(coeffs) + [_Q(0)] * slack_count)
        rhs.append(_Q(b))
    for coeffs, b in ge:
        row = expand(coeffs) + [_Q(0)] * slack_count
        b = _Q(b)
        if b <= 0:
            # flip so the surplus column can start in the basis
            row = [-x for x in row]
            row[srow] = _Q(1)
            b = -b
        else:
            row[srow] = _Q(-1)
        srow += 1
        rows.append(row)
        rhs.append(b)
    for coeffs, b in le:
        row = expand(coeffs) + [_Q(0)] * slack_count
        row[srow] = _Q(1)
        srow += 1
        rows.append(row)
        rhs.append(_Q(b))
    cost = [_Q(0)] * total
    if objective is not None:
        sign = -1 if maximize else 1
        for i, v in enumerate(objective):
            if v:
                cost[i] = sign * _Q(v)
                if i in neg_col:
                    cost[neg_col[i]] = -sign * _Q(v)
    status, xfull, value, _ = simplex_standard(rows, rhs, cost)
    if status != OPTIMAL:
        return LPResult(status, None, None)
    x = []
    for i in range(nvars):
        v = xfull[i]
        if i in neg_col:
            v = v - xfull[neg_col[i]]
        x.append(_to_fraction(v))
    val = _to_fraction(value)
    if maximize:
        val = -val
    return LPResult(OPTIMAL, tuple(x), val)


def lp_feasible(nvars, eq=(), ge=(), le=(), free=()):
    """Is the system satisfiable? Exact feasibility via phase 1 only."""
    res = solve_lp(nvars, None, eq=eq, ge=ge, le=le, free=free)
    return res.status == OPTIMAL
