"""Exact convex geometry built around one double description engine.

Cones are {x : E x = 0, A x >= 0}; the engine inserts inequalities one
at a time, carrying a lineality basis and the extreme rays as primitive
integer vectors. Polytope vertex enumeration homogenises with a slack
coordinate, duals feed the rays back in as inequalities, and convex
hulls are computed as double duals. Everything is exact and outputs are
canonically ordered, so repeated runs agree byte for byte.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .intlinalg import hnf_basis, left_kernel, rank_int


def as_fraction(x):
    """Coerce exact rationals (int, Fraction, gmpy2 mpq) to a clean Fraction.

    Rebuilds Fractions too: one constructed from an mpq keeps mpz parts
    inside, and mixed mpz/int arithmetic blows up later."""
    if type(x) is int:
        return x
    return Fraction(int(x.numerator), int(x.denominator))


def primitive_vector(v):
    """Scale to a primitive integer vector, None for the zero vector."""
    vals = [as_fraction(x) for x in v]
    if not any(vals):
        return None
    mult = 1
    for x in vals:
        if isinstance(x, Fraction):
            d = x.denominator
            mult = mult * d // gcd(mult, d)
    ints = [int(x * mult) for x in vals]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _int_rows(rows):
    out = []
    for r in rows:
        p = primitive_vector(r)
        if p is not None:
            out.append(p)
    return out


def nullspace_int(rows, dim):
    """Saturated integer basis of {x : row . x = 0 for every row}."""
    rows = _int_rows(rows)
    if not rows:
        return [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    cols = [[r[i] for r in rows] for i in range(dim)]
    return [tuple(x) for x in left_kernel(cols, len(rows))]


class Cone(NamedTuple):
    dim: int
    lineality: tuple
    rays: tuple


def _canonical_cone(dim, lineality, rays):
    lin = tuple(tuple(r) for r in hnf_basis([list(x) for x in lineality], dim))
    return Cone(dim, lin, tuple(sorted(set(rays))))


def cone_double_description(dim, ineqs=(), eqs=()):
    """Extreme rays and lineality of {x : eqs x = 0, ineqs x >= 0}."""
    L = [list(x) for x in nullspace_int(eqs, dim)]
    R = []
    done = []
    for raw in _int_rows(ineqs):
        a = list(raw)
        pidx = next((k for k, l in enumerate(L) if _dot(a, l) != 0), None)
        if pidx is not None:
            pivot = L.pop(pidx)
            s = _dot(a, pivot)
            if s < 0:
                pivot = [-x for x in pivot]
                s = -s
            fresh = []
            for l in L:
                al = _dot(a, l)
                if al:
                    l = [s * l[i] - al * pivot[i] for i in range(dim)]
                p = primitive_vector(l)
                if p is not None:
                    fresh.append(list(p))
            L = fresh
            R = [
                primitive_vector(
                    [s * r[i] - _dot(a, r) * pivot[i] for i in range(dim)]
                )
                for r in R
            ]
            R = [r for r in R if r is not None]
            R.append(tuple(pivot))
            done.append(a)
            continue
        vals = [_dot(a, r) for r in R]
        plus = [r for r, v in zip(R, vals) if v > 0]
        zero = [r for r, v in zip(R, vals) if v == 0]
        minus = [r for r, v in zip(R, vals) if v < 0]
        if not minus:
            done.append(a)
            continue
        masks = {}
        for r in R:
            m = 0
            for k, b in enumerate(done):
                if _dot(b, r) == 0:
                    m |= 1 << k
            masks[r] = m
        combos = set()
        for p in plus:
            ap = _dot(a, p)
            for q in minus:
                common = masks[p] & masks[q]
                blocked = False
                for other in R:
                    if other is p or other is q:
                        continue
                    if common & ~masks[other] == 0:
                        blocked = True
                        break
                if blocked:
                    continue
                aq = _dot(a, q)
                z = primitive_vector(
                    [ap * q[i] - aq * p[i] for i in range(dim)]
                )
                if z is not None:
                    combos.add(z)
        R = plus + zero + sorted(combos)
        done.append(a)
    return _canonical_cone(dim, L, R)


def dual_cone(cone):
    """{y : y . r >= 0 on rays, y . l = 0 on lineality}."""
    return cone_double_description(cone.dim, ineqs=cone.rays, eqs=cone.lineality)


def minimal_cone(dim, generators, lineality=()):
    """Canonical extreme-ray form of the cone the generators span."""
    d = cone_double_description(dim, ineqs=generators, eqs=lineality)
    return cone_double_description(dim, ineqs=d.rays, eqs=d.lineality)


class VertexSet(NamedTuple):
    vertices: tuple    # rational points
    rays: tuple        # primitive integer recession directions
    lineality: tuple


def polytope_vertices(dim, ineqs=(), eqs=()):
    """Vertices, recession rays, lineality of {A x >= b, E x = e}.

    Inequalities and equalities are (coefficients, rhs) pairs. Works by
    homogenising with a last slack coordinate required non-negative.
    """
    hom_ineqs = [list(c) + [-rhs] for c, rhs in ineqs]
    hom_ineqs.append([0] * dim + [1])
    hom_eqs = [list(c) + [-rhs] for c, rhs in eqs]
    cone = cone_double_description(dim + 1, hom_ineqs, hom_eqs)
    verts = []
    rays = []
    for r in cone.rays:
        t = r[dim]
        if t > 0:
            verts.append(tuple(Fraction(x, t) for x in r[:dim]))
        else:
            rays.append(r[:dim])
    lin = [l[:dim] for l in cone.lineality]
    return VertexSet(tuple(sorted(verts)), tuple(sorted(rays)), tuple(lin))


class Hull(NamedTuple):
    dim: int
    vertices: tuple    # extreme points
    rays: tuple        # extreme recession directions
    facets: tuple      # (normal, rhs): normal . x >= rhs
    equations: tuple   # (normal, rhs): normal . x = rhs


def convex_hull(dim, points, rays=(), lineality=()):
    """Irredundant H- and V-description of conv(points) + cone(rays)."""
    gens = []
    for p in points:
        g = primitive_vector((1,) + tuple(p))
        gens.append(g)
    for r in rays:
        g = primitive_vector((0,) + tuple(r))
        if g is not None:
            gens.append(g)
    if not gens:
        return Hull(dim, (), (), (), ())
    lin = [(0,) + tuple(l) for l in lineality]
    dual = cone_double_description(dim + 1, ineqs=gens, eqs=lin)
    facets = tuple(
        sorted((tuple(y[1:]), -y[0]) for y in dual.rays if any(y[1:]))
    )
    equations = tuple(
        sorted((tuple(y[1:]), -y[0]) for y in dual.lineality if any(y[1:]))
    )
    back = cone_double_description(dim + 1, ineqs=dual.rays, eqs=dual.lineality)
    verts = []
    drays = []
    for r in back.rays:
        if r[0] > 0:
            verts.append(tuple(Fraction(x, r[0]) for x in r[1:]))
        elif r[0] == 0:
            drays.append(r[1:])
    for l in back.lineality:
        # hull of points always meets {t = 1}; lineality splits into
        # direction pairs, t component is zero there
        if any(l[1:]):
            drays.append(primitive_vector(l[1:]))
            drays.append(primitive_vector([-x for x in l[1:]]))
    return Hull(
        dim,
        tuple(sorted(verts)),
        tuple(sorted(drays)),
        facets,
        equations,
    )


class Face(NamedTuple):
    dim: int
    vertices: frozenset
    rays: frozenset


def _face_dim(hull, vset, rset):
    if not vset:
        return -1
    pts = [hull.vertices[i] for i in sorted(vset)]
    dirs = [[x - y for x, y in zip(p, pts[0])] for p in pts[1:]]
    dirs += [list(hull.rays[i]) for i in sorted(rset)]
    dirs = _int_rows(dirs)
    return rank_int([list(d) for d in dirs], hull.dim) if dirs else 0


def face_lattice(hull):
    """Every nonempty face, as sets of incident vertices and rays."""
    nv, nr = len(hull.vertices), len(hull.rays)
    tight_v = []
    tight_r = []
    for normal, rhs in hull.facets:
        tight_v.append(
            frozenset(
                i for i, v in enumerate(hull.vertices) if _dot(normal, v) == rhs
            )
        )
        tight_r.append(
            frozenset(i for i, r in enumerate(hull.rays) if _dot(normal, r) == 0)
        )
    top = (frozenset(range(nv)), frozenset(range(nr)))
    seen = {top}
    frontier = [top]
    while frontier:
        fresh = []
        for vs, rs in frontier:
            for fv, fr in zip(tight_v, tight_r):
                cand = (vs & fv, rs & fr)
                if cand[0] and cand not in seen:
                    seen.add(cand)
                    fresh.append(cand)
        frontier = fresh
    return sorted(
        (Face(_face_dim(hull, vs, rs), vs, rs) for vs, rs in seen),
        key=lambda f: (f.dim, sorted(f.vertices), sorted(f.rays)),
    )
