"""Slow reference engines used to cross-check the fast paths.

Everything here recomputes answers from first definitions, without the
pruning the production code leans on. The `mckay check` command runs
these against the fast engines on user-supplied instances and fails
loudly on any mismatch.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

from .closure import cycle_closure
from .flows import ZetaVector, incidence_rows
from .intlinalg import rank_int
from .polyhedra import _dot, _int_rows, convex_hull, face_lattice, polytope_vertices
from .quiver import enumerate_cycles


def _walk_witness(q, sbar, aid, max_len):
    """Bounded search for a type-zero closed walk that steps backward
    over arrow aid once while keeping every forward step inside sbar."""
    a = q.arrows[aid]
    n = q.n
    target = (a.head, tuple(1 if k == a.type - 1 else 0 for k in range(n)))
    start = (a.tail, (0,) * n)
    seen = {start}
    frontier = [start]
    budget = max_len - 1
    for step in range(budget):
        room = budget - step
        fresh = []
        for v, delta in frontier:
            gap = sum(abs(x - y) for x, y in zip(delta, target[1]))
            if gap > room:
                continue
            for b in q.out_arrows(v):
                if b.id not in sbar:
                    continue
                nd = list(delta)
                nd[b.type - 1] += 1
                st = (b.head, tuple(nd))
                if st == target:
                    return True
                if st not in seen:
                    seen.add(st)
                    fresh.append(st)
            for b in q.in_arrows(v):
                nd = list(delta)
                nd[b.type - 1] -= 1
                st = (b.tail, tuple(nd))
                if st == target:
                    return True
                if st not in seen:
                    seen.add(st)
                    fresh.append(st)
        if not fresh:
            return False
        frontier = fresh
    return False


def closure_bruteforce(q, S, max_len=None):
    """Fixed point of the walk rule, each arrow decided by breadth-first
    search for a witness walk of bounded length instead of any LP."""
    if max_len is None:
        max_len = len(q.arrows)
    sbar = set(S)
    changed = True
    while changed:
        changed = False
        for a in range(len(q.arrows)):
            if a not in sbar and _walk_witness(q, sbar, a, max_len):
                sbar.add(a)
                changed = True
    return frozenset(sbar)


_MASK_CACHE = {}


def _type_zero_masks(q, max_len):
    """Forward/backward bitmasks of every type-zero cycle up to max_len."""
    key = (q.action.factors, max_len)
    masks = _MASK_CACHE.get(key)
    if masks is None:
        masks = []
        for c in enumerate_cycles(q, max_len):
            tv = [0] * q.n
            pos = neg = 0
            for aid, sign in c:
                tv[q.arrows[aid].type - 1] += sign
                if sign > 0:
                    pos |= 1 << aid
                else:
                    neg |= 1 << aid
            if not any(tv):
                masks.append((pos, neg))
        _MASK_CACHE[key] = masks
    return masks


def closure_enumerated(q, S, max_len=None):
    """Fixed point of the walk rule over materialised cycles. Feasible
    only at small scale: the cycle count explodes with the bound."""
    if max_len is None:
        max_len = len(q.arrows)
    masks = _type_zero_masks(q, max_len)
    sb = 0
    for a in S:
        sb |= 1 << a
    changed = True
    while changed:
        changed = False
        for pos, neg in masks:
            if pos & ~sb == 0 and neg & ~sb != 0:
                sb |= neg
                changed = True
            if neg & ~sb == 0 and pos & ~sb != 0:
                sb |= pos
                changed = True
    return frozenset(a for a in range(len(q.arrows)) if sb >> a & 1)


def check_closure(q, S, max_len=None):
    """Compare the LP engine with the walk oracle; a disagreement gets
    one doubled-bound retry in case the bound clipped a witness."""
    fast = cycle_closure(q, S)
    if max_len is None:
        max_len = len(q.arrows)
    if closure_bruteforce(q, S, max_len) == fast:
        return True
    return closure_bruteforce(q, S, 2 * max_len) == fast


class HPolytope(NamedTuple):
    dim: int
    ineqs: tuple    # (coefficients, rhs) rows meaning coeffs . x >= rhs
    eqs: tuple      # (coefficients, rhs) rows meaning coeffs . x = rhs


def flow_polytope(q, zeta):
    """The admissible flows of zeta as an explicit inequality system."""
    if not isinstance(zeta, ZetaVector):
        zeta = ZetaVector(zeta)
    m = len(q.arrows)
    inc = incidence_rows(q)
    eqs = tuple(
        (tuple(row[v] for row in inc), zeta[v]) for v in range(q.num_vertices)
    )
    ineqs = tuple(
        (tuple(1 if j == a else 0 for j in range(m)), 0) for a in range(m)
    )
    return HPolytope(m, ineqs, eqs)


def _solve_square(rows, rhs):
    """Unique rational solution of rows . x = rhs, or None."""
    n = len(rows[0])
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][col]), None)
        if piv is None:
            return None
        a[r], a[piv] = a[piv], a[r]
        d = a[r][col]
        a[r] = [x / d for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(col)
        r += 1
        if r == n:
            break
    if r < n:
        return None
    for i in range(n, len(a)):
        if a[i][n]:
            return None
    return tuple(a[i][n] for i in range(n))


def _basic_feasible_points(p):
    """Vertices as basic solutions: every choice of tight inequalities
    completing the equalities to a full-rank square system."""
    d = p.dim
    eq_rows = [list(c) for c, _ in p.eqs]
    eq_rhs = [b for _, b in p.eqs]
    base = rank_int(_int_rows(eq_rows), d) if eq_rows else 0
    need = d - base
    found = set()
    for pick in combinations(range(len(p.ineqs)), need):
        rows = eq_rows + [list(p.ineqs[i][0]) for i in pick]
        rhs = eq_rhs + [p.ineqs[i][1] for i in pick]
        x = _solve_square(rows, rhs)
        if x is None:
            continue
        if all(_dot(c, x) >= b for c, b in p.ineqs):
            found.add(x)
    return found


def vertices_bruteforce(p):
    """Vertices and recession rays of an inequality system, twice over.

    Double description and basic-solution enumeration run independently
    and must produce the same vertex set."""
    dd = polytope_vertices(p.dim, p.ineqs, p.eqs)
    if not dd.lineality:
        basic = _basic_feasible_points(p)
        if basic != set(dd.vertices):
            raise ArithmeticError("vertex enumeration paths disagree")
    return dd


class ProjectedHull(NamedTuple):
    hull: object    # Hull of the image
    faces: tuple    # its face lattice


def project_and_hull(points, rays, mat):
    """Exact hull of the image of a vertex/ray description under the
    linear map whose rows are mat."""
    out_dim = len(mat)
    img_pts = sorted({tuple(_dot(row, p) for row in mat) for p in points})
    img_rays = set()
    for r in rays:
        v = tuple(_dot(row, r) for row in mat)
        if any(v):
            img_rays.add(v)
    hull = convex_hull(out_dim, img_pts, rays=sorted(img_rays))
    return ProjectedHull(hull, tuple(face_lattice(hull)))


def type_projection_rows(q):
    """Matrix of the arrow-space to type-space projection."""
    rows = []
    for t in range(1, q.n + 1):
        rows.append(tuple(1 if a.type == t else 0 for a in q.arrows))
    return rows
