"""Toric data carried by the projected flow polyhedra.

Every configuration gets a cone in type space: the projection of the
flows with zero boundary that stay non-negative off its closure. At the
extreme points these cones are the local geometry of the projected
polyhedron, their duals glue into a fan in the dual type lattice, and
the fan decides smoothness, quotient structure, and crepancy.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .closure import cycle_closure, rank
from .flows import ZetaVector, incidence_rows, lattice_pi
from .intlinalg import det_bareiss, hnf_basis, left_kernel, rank_int, snf_transform
from .polyhedra import (
    as_fraction,
    cone_double_description,
    dual_cone,
    minimal_cone,
    primitive_vector,
)
from .trees import closed_admissible_trees, is_generic


def _mat_inv(rows):
    """Inverse of a square matrix of exact rationals, by Gauss-Jordan."""
    n = len(rows)
    a = [[Fraction(as_fraction(x)) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col])
        a[col], a[piv] = a[piv], a[col]
        d = a[col][col]
        a[col] = [x / d for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [r[n:] for r in a]


class TypeLattices:
    """A full-rank sublattice of Z^n and its dual, with coordinate maps.

    Vectors are rows; the lattice is the integer row span of basis.rows.
    The dual realizes as the rational lattice pairing integrally with
    it, so a cyclic action 1/r(w) gets Z^n + (1/r) w Z on that side."""

    __slots__ = ("basis", "_rows", "_inv", "dual_rows")

    def __init__(self, basis):
        self.basis = basis
        self._rows = [list(r) for r in basis.rows]
        self._inv = _mat_inv(self._rows)
        n = len(self._rows)
        self.dual_rows = tuple(
            tuple(self._inv[j][i] for j in range(n)) for i in range(n)
        )

    def coords(self, v):
        inv = self._inv
        n = len(inv)
        return tuple(sum(as_fraction(v[k]) * inv[k][j] for k in range(n)) for j in range(n))

    def from_coords(self, c):
        rows = self._rows
        n = len(rows)
        return tuple(sum(c[k] * rows[k][j] for k in range(n)) for j in range(n))

    def primitive(self, d):
        """Shortest lattice vector on the ray through d."""
        c = primitive_vector(self.coords(d))
        v = self.from_coords(c)
        assert all(as_fraction(x).denominator == 1 for x in v)
        return tuple(int(x) for x in v)

    def dual_coords(self, v):
        rows = self._rows
        return tuple(sum(as_fraction(v[k]) * row[k] for k in range(len(v))) for row in rows)

    def dual_from_coords(self, c):
        dr = self.dual_rows
        n = len(dr)
        return tuple(sum(c[k] * dr[k][j] for k in range(n)) for j in range(n))

    def dual_primitive(self, d):
        """Shortest dual-lattice vector on the ray through d."""
        c = primitive_vector(self.dual_coords(d))
        return _as_point(self.dual_from_coords(c))


_LATTICE_CACHE = {}


def _lattices_for(basis):
    key = (basis.ambient, basis.rows)
    got = _LATTICE_CACHE.get(key)
    if got is None:
        got = _LATTICE_CACHE[key] = TypeLattices(basis)
    return got


def type_lattices(q):
    """The congruence lattice of type space for this action, with maps."""
    return _lattices_for(lattice_pi(q))


class LatticeCone(NamedTuple):
    lattice: object     # LatticeBasis the generators are primitive in
    generators: tuple   # extreme rays, ambient integer tuples, sorted
    coords: tuple       # the same rays in lattice coordinates
    lineality: tuple    # ambient integer basis rows of the lineality part
    dim: int


def _type_cone(q, arrows):
    """Projection to type space of the zero-boundary flows that are
    non-negative outside the given arrow set."""
    m = len(q.arrows)
    inc = incidence_rows(q)
    eqs = [tuple(row[v] for row in inc) for v in range(q.num_vertices)]
    ineqs = [
        tuple(1 if j == a else 0 for j in range(m))
        for a in range(m)
        if a not in arrows
    ]
    cone = cone_double_description(m, ineqs=ineqs, eqs=eqs)
    n = q.n

    def proj(vec):
        t = [0] * n
        for a, x in enumerate(vec):
            t[q.arrows[a].type - 1] += x
        return tuple(t)

    pts = [proj(ray) for ray in cone.rays]
    for l in cone.lineality:
        p = proj(l)
        pts.append(p)
        pts.append(tuple(-x for x in p))
    return minimal_cone(n, [p for p in pts if any(p)])


def tangent_cone(q, S, close=True):
    """Local cone of the projected polyhedron along the face of S.

    Computed on the cycle closure of S; passing close=False skips the
    closure step (the result is the same cone, which makes a handy
    cross-check)."""
    arrows = frozenset(cycle_closure(q, S)) if close else frozenset(S)
    raw = _type_cone(q, arrows)
    lat = type_lattices(q)
    gens = sorted(lat.primitive(g) for g in raw.rays)
    coords = tuple(tuple(int(x) for x in lat.coords(g)) for g in gens)
    cdim = rank_int([list(g) for g in gens] + [list(l) for l in raw.lineality])
    return LatticeCone(lat.basis, tuple(gens), coords, raw.lineality, cdim)


class ConeClass(NamedTuple):
    kind: str           # smooth | cyclic-quotient | quadric-cone | other | face
    order: int = 0
    weights: tuple = ()
    relations: tuple = ()


def _quotient_data(cone):
    """Order and normal-form weights of the dual-side lattice quotient.

    The chart at a simplicial vertex cone is affine space divided by
    the dual lattice modulo the span of the dual generators; order and
    weights live there, not in the primal determinant."""
    lat = _lattices_for(cone.lattice)
    n = len(cone.generators[0])
    dual = dual_cone(minimal_cone(n, cone.generators))
    rows = [primitive_vector(lat.dual_coords(u)) for u in dual.rays]
    D, U, V = snf_transform(rows)
    order = 1
    for i in range(n):
        order *= D[i][i]
    if any(D[i][i] != 1 for i in range(n - 1)):
        return order, None
    k = D[n - 1][n - 1]
    weights = tuple(x % k for x in U[n - 1])
    best = None
    for t in range(1, k):
        if gcd(t, k) != 1:
            continue
        cand = tuple(sorted((t * x) % k for x in weights))
        if best is None or cand < best:
            best = cand
    return order, best


def classify_cone(cone):
    """Sort a full-dimensional vertex cone into the basic toric cases."""
    n = cone.lattice.ambient
    if cone.lineality or cone.dim < n:
        return ConeClass("face")
    gens = cone.coords
    if len(gens) == n:
        d = abs(det_bareiss([list(g) for g in gens]))
        if d == 1:
            return ConeClass("smooth")
        order, weights = _quotient_data(cone)
        if weights is None:
            rel = tuple(tuple(x) for x in left_kernel([list(g) for g in gens]))
            return ConeClass("other", order=order, relations=rel)
        return ConeClass("cyclic-quotient", order=order, weights=weights)
    if len(gens) == 4 and n == 3:
        triples_ok = all(
            abs(det_bareiss([list(gens[i]) for i in range(4) if i != skip])) == 1
            for skip in range(4)
        )
        if triples_ok:
            for j in (1, 2, 3):
                rest = [k for k in (1, 2, 3) if k != j]
                if tuple(a + b for a, b in zip(gens[0], gens[j])) == tuple(
                    a + b for a, b in zip(gens[rest[0]], gens[rest[1]])
                ):
                    rel = [0, 0, 0, 0]
                    rel[0] = rel[j] = 1
                    rel[rest[0]] = rel[rest[1]] = -1
                    return ConeClass("quadric-cone", relations=(tuple(rel),))
    rel = tuple(tuple(x) for x in left_kernel([list(g) for g in gens]))
    return ConeClass("other", relations=rel)


class ExtremePoint(NamedTuple):
    point: tuple    # vertex of the projected polyhedron
    tree: tuple     # spanning tree representative
    closure: tuple  # cycle closure of the strictly positive support
    cone: LatticeCone


def _as_point(vals):
    out = []
    for x in vals:
        f = as_fraction(x)
        out.append(int(f) if isinstance(f, int) or f.denominator == 1 else f)
    return tuple(out)


_EXTREME_CACHE = {}


def extreme_points(q, zeta):
    """Vertices of the projected flow polyhedron with their local data.

    One entry per closure class of strictly positive tree supports whose
    face is a point. Dominated projections are pruned first: the
    recession cone contains the positive orthant, so they cannot be
    vertices."""
    if not isinstance(zeta, ZetaVector):
        zeta = ZetaVector(zeta)
    key = (q.action.factors, zeta.values)
    hit = _EXTREME_CACHE.get(key)
    if hit is not None:
        return list(hit)
    pairs = closed_admissible_trees(q, zeta)
    if not pairs:
        _EXTREME_CACHE[key] = ()
        return []
    n = q.n
    groups = {}
    for T, fl in pairs:
        x = [Fraction(0)] * n
        for a, val in fl.items():
            x[q.arrows[a].type - 1] += as_fraction(val)
        groups.setdefault(tuple(x), []).append((T, fl))
    frontier = []
    for p in sorted(groups):
        if not any(all(f[i] <= p[i] for i in range(n)) for f in frontier):
            frontier = [f for f in frontier if not all(p[i] <= f[i] for i in range(n))]
            frontier.append(p)
    out = []
    seen_closures = set()
    for p in frontier:
        T, fl = min(groups[p], key=lambda tf: tf[0])
        support = tuple(a for a in T if fl[a] > 0)
        cl = cycle_closure(q, support)
        if rank(q, cl) != 0:
            continue
        assert cl not in seen_closures, "closure classes must separate vertices"
        seen_closures.add(cl)
        out.append(ExtremePoint(_as_point(p), T, tuple(sorted(cl)), tangent_cone(q, cl)))
    out.sort(key=lambda ep: ep.point)
    _EXTREME_CACHE[key] = tuple(out)
    return out


def euler_number(q, zeta):
    """Number of vertices of the projected polyhedron."""
    return len(extreme_points(q, zeta))


class VertexReport(NamedTuple):
    point: tuple
    generator_count: int
    smooth: bool
    label: ConeClass


class SingularityReport(NamedTuple):
    entries: tuple

    @property
    def all_smooth(self):
        return all(e.smooth for e in self.entries)


def singularity_report(q, zeta):
    """Classify the tangent cone at every vertex."""
    entries = []
    for ep in extreme_points(q, zeta):
        label = classify_cone(ep.cone)
        entries.append(
            VertexReport(ep.point, len(ep.cone.generators), label.kind == "smooth", label)
        )
    return SingularityReport(tuple(entries))


class Fan(NamedTuple):
    rays: tuple         # primitive generators in the dual lattice, sorted
    maximal: tuple      # index tuples into rays, one per vertex cone
    faces: tuple        # every face of every maximal cone, as index tuples
    points: tuple       # vertex each maximal cone is dual to, aligned
    compatible: bool
    warnings: tuple


def _cone_faces(ray_vecs, normals):
    """Ray subsets spanning faces: tight sets of the facet normals,
    closed under intersection."""
    full = frozenset(range(len(ray_vecs)))
    seeds = []
    for h in normals:
        seeds.append(
            frozenset(i for i in full if sum(a * b for a, b in zip(h, ray_vecs[i])) == 0)
        )
    faces = {full, frozenset()}
    frontier = [full]
    while frontier:
        cur = frontier.pop()
        for s in seeds:
            nxt = cur & s
            if nxt not in faces:
                faces.add(nxt)
                frontier.append(nxt)
    return faces


def build_fan(q, zeta):
    """Glue the duals of the vertex cones into a fan in the dual lattice.

    Pairwise compatibility of the maximal cones is verified, not
    assumed. Degenerate weight vectors still produce a fan, with a
    warning attached."""
    if not isinstance(zeta, ZetaVector):
        zeta = ZetaVector(zeta)
    warnings = ()
    if not is_generic(zeta):
        warnings = ("weights are not generic: chamber boundaries may merge cones",)
    lat = type_lattices(q)
    n = q.n
    ray_index = {}
    rays = []
    entries = []
    for ep in extreme_points(q, zeta):
        gens = list(ep.cone.generators)
        for l in ep.cone.lineality:
            gens.append(tuple(l))
            gens.append(tuple(-x for x in l))
        dual = dual_cone(minimal_cone(n, gens))
        prim = sorted(lat.dual_primitive(u) for u in dual.rays)
        for u in prim:
            if u not in ray_index:
                ray_index[u] = len(rays)
                rays.append(u)
        entries.append((prim, ep.cone.generators, ep.point))
    order = sorted(range(len(rays)), key=lambda i: rays[i])
    renum = {rays[old]: new for new, old in enumerate(order)}
    rays = tuple(rays[i] for i in order)
    maximal = []
    faces = set()
    for prim, normals, point in entries:
        local = [renum[u] for u in prim]
        maximal.append(tuple(sorted(local)))
        vecs = [rays[i] for i in local]
        for fs in _cone_faces(vecs, normals):
            faces.add(tuple(sorted(local[i] for i in fs)))
    compatible = _fan_compatible(n, [normals for _, normals, _ in entries])
    return Fan(
        rays,
        tuple(maximal),
        tuple(sorted(faces, key=lambda f: (len(f), f))),
        tuple(point for _, _, point in entries),
        compatible,
        warnings,
    )


def _fan_compatible(n, cones):
    """Every pairwise intersection must be a face of both cones.

    Each maximal cone is handed over by its facet normals, which are the
    primal tangent cone generators."""
    for i in range(len(cones)):
        normi = cones[i]
        for j in range(i + 1, len(cones)):
            normj = cones[j]
            cut = cone_double_description(n, ineqs=list(normi) + list(normj))
            for norms in (normi, normj):
                tight = [
                    h
                    for h in norms
                    if all(sum(a * b for a, b in zip(h, g)) == 0 for g in cut.rays)
                    and all(sum(a * b for a, b in zip(h, l)) == 0 for l in cut.lineality)
                ]
                if cone_double_description(n, ineqs=list(norms), eqs=tight) != cut:
                    return False
    return True


class CrepancyReport(NamedTuple):
    crepant: bool
    ray_sums: tuple     # (ray, coordinate sum) per fan ray


def crepancy_check(fan):
    """A fan is crepant when every ray generator lies on coordinate sum 1."""
    sums = tuple((ray, sum(ray)) for ray in fan.rays)
    return CrepancyReport(all(s == 1 for _, s in sums), sums)


def k_adjacency(q, S, S2):
    """Dimension of the smallest face holding both images: rank of the union."""
    return rank(q, frozenset(S) | frozenset(S2))


class FaceDescriptor(NamedTuple):
    point: tuple        # canonical representative of the affine part
    directions: tuple   # integer basis rows of the direction space
    dim: int


def face_of(q, S, zeta):
    """Face of the projected polyhedron spanned by flows with support S.

    Raises ValueError when no flow with that exact support meets the
    demand."""
    from .simplex import solve_lp

    if not isinstance(zeta, ZetaVector):
        zeta = ZetaVector(zeta)
    S = tuple(sorted(set(S)))
    nvar = len(S) + 1  # flow on S plus the margin variable
    eq = []
    for v in range(q.num_vertices):
        row = [0] * nvar
        for i, a in enumerate(S):
            arr = q.arrows[a]
            if arr.head == v:
                row[i] += 1
            if arr.tail == v:
                row[i] -= 1
        eq.append((row, zeta[v]))
    ge = []
    for i in range(len(S)):
        row = [0] * nvar
        row[i] = 1
        row[-1] = -1
        ge.append((row, 0))
    le = [([0] * (nvar - 1) + [1], 1)]
    obj = [0] * (nvar - 1) + [1]
    res = solve_lp(nvar, objective=obj, eq=eq, ge=ge, le=le, maximize=True)
    if res.status != "optimal" or res.x[-1] <= 0:
        raise ValueError("no flow with this support meets the demand")
    n = q.n
    point = [Fraction(0)] * n
    for i, a in enumerate(S):
        point[q.arrows[a].type - 1] += as_fraction(res.x[i])
    sbar = sorted(cycle_closure(q, S))
    inc = incidence_rows(q)
    kern = left_kernel([list(inc[a]) for a in sbar]) if sbar else []
    projected = []
    for g in kern:
        t = [0] * n
        for x, a in zip(g, sbar):
            t[q.arrows[a].type - 1] += x
        if any(t):
            projected.append(t)
    dirs = [tuple(r) for r in hnf_basis(projected, n)] if projected else []
    assert len(dirs) == rank(q, S)
    # canonical coset representative: sweep out the pivot coordinates
    red = [as_fraction(x) for x in point]
    for row in dirs:
        piv = next(i for i, x in enumerate(row) if x)
        f = red[piv] / row[piv]
        red = [x - f * y for x, y in zip(red, row)]
    return FaceDescriptor(_as_point(red), tuple(dirs), len(dirs))
