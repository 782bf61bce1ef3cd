import random
from fractions import Fraction

import pytest

from mckay.quiver import build_mckay_cyclic
from mckay.trees import closed_admissible_trees
from mckay.toric import extreme_points
from mckay.oracle import (
    HPolytope,
    check_closure,
    closure_bruteforce,
    closure_enumerated,
    flow_polytope,
    project_and_hull,
    type_projection_rows,
    vertices_bruteforce,
)

Q2 = build_mckay_cyclic(2, [1, 1])
Q3 = build_mckay_cyclic(3, [1, 1, 1])
Q5 = build_mckay_cyclic(5, [1, 2, 3])
Z131 = (-1, -1, -1, -1, 4)


def full_vectors(q, pairs):
    m = len(q.arrows)
    return {tuple(fl.get(i, 0) for i in range(m)) for _, fl in pairs}


def test_flow_polytope_shape():
    p = flow_polytope(Q5, Z131)
    assert p.dim == 15
    assert len(p.eqs) == 5       # one balance equation per vertex
    assert len(p.ineqs) == 15    # one sign constraint per arrow
    for row, rhs in p.eqs:
        assert len(row) == 15
    assert [rhs for _, rhs in p.eqs] == list(Z131)


def test_two_vertex_vertices_are_single_arrow_flows():
    vs = vertices_bruteforce(flow_polytope(Q2, (1, -1)))
    # demand +1 at vertex 0 rides one of the two arrows pointing at it
    assert sorted(vs.vertices) == [(0, 0, 0, 1), (0, 0, 1, 0)]
    assert vs.lineality == ()
    assert full_vectors(Q2, closed_admissible_trees(Q2, (1, -1))) == {
        tuple(v) for v in vs.vertices
    }


def test_zero_polytope_is_apex_plus_cycle_cone():
    vs = vertices_bruteforce(flow_polytope(Q2, (0, 0)))
    assert vs.vertices == ((0, 0, 0, 0),)
    assert sorted(vs.rays) == [
        (0, 1, 0, 1),
        (0, 1, 1, 0),
        (1, 0, 0, 1),
        (1, 0, 1, 0),
    ]


def test_standard_simplex_vertices():
    ineqs = (((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((-1, -1, -1), -1))
    vs = vertices_bruteforce(HPolytope(3, ineqs, ()))
    assert sorted(vs.vertices) == [
        (0, 0, 0),
        (0, 0, 1),
        (0, 1, 0),
        (1, 0, 0),
    ]
    assert vs.rays == ()


def test_vertices_match_admissible_tree_flows():
    for q, zeta in ((Q3, (1, 1, -2)), (Q3, (2, -1, -1)), (Q5, Z131)):
        vs = vertices_bruteforce(flow_polytope(q, zeta))
        assert {tuple(v) for v in vs.vertices} == full_vectors(
            q, closed_admissible_trees(q, zeta)
        )


def test_identity_projection_returns_the_input():
    vs = vertices_bruteforce(flow_polytope(Q2, (1, -1)))
    ident = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))
    ph = project_and_hull(vs.vertices, vs.rays, ident)
    assert sorted(ph.hull.vertices) == sorted(vs.vertices)


def test_chopped_quadrant_for_triple_triangle():
    vs = vertices_bruteforce(flow_polytope(Q3, (1, 1, -2)))
    ph = project_and_hull(vs.vertices, vs.rays, type_projection_rows(Q3))
    assert sorted(ph.hull.vertices) == [(0, 0, 3), (0, 3, 0), (3, 0, 0)]
    # quadrant walls plus the one chopping plane
    assert sorted(ph.hull.facets) == [
        ((0, 0, 1), 0),
        ((0, 1, 0), 0),
        ((1, 0, 0), 0),
        ((1, 1, 1), 3),
    ]


def test_131_vertex_figure_has_four_edges():
    vs = vertices_bruteforce(flow_polytope(Q5, Z131))
    ph = project_and_hull(vs.vertices, vs.rays, type_projection_rows(Q5))
    verts = [tuple(v) for v in ph.hull.vertices]
    at = verts.index((1, 3, 1))
    edges = [f for f in ph.faces if f.dim == 1 and at in f.vertices]
    assert len(edges) == 4


def test_hull_vertices_match_extreme_points():
    for zeta in (Z131, (9, 8, -3, -2, -12)):
        vs = vertices_bruteforce(flow_polytope(Q5, zeta))
        ph = project_and_hull(vs.vertices, vs.rays, type_projection_rows(Q5))
        got = {tuple(v) for v in ph.hull.vertices}
        want = {tuple(e.point) for e in extreme_points(Q5, zeta)}
        assert got == want


def test_type_projection_rows_layout():
    rows = type_projection_rows(Q2)
    assert list(rows) == [(1, 0, 1, 0), (0, 1, 0, 1)]
    rows5 = type_projection_rows(Q5)
    assert len(rows5) == 3
    for t, row in enumerate(rows5, start=1):
        assert sum(row) == 5
        for a, c in enumerate(row):
            assert c == (1 if Q5.arrows[a].type == t else 0)


def test_closure_bruteforce_fixes_the_131_tree():
    T = frozenset({0, 4, 8, 10})
    assert closure_bruteforce(Q5, T) == T
    full = frozenset(range(15))
    assert closure_bruteforce(Q5, full) == full


def test_check_closure_agrees_on_samples():
    rng = random.Random(11)
    for _ in range(15):
        s = frozenset(rng.sample(range(15), rng.randint(0, 6)))
        assert check_closure(Q5, s)


def test_enumerated_closure_matches_bruteforce_on_q3():
    for bits in range(2 ** 9):
        s = frozenset(a for a in range(9) if bits >> a & 1)
        assert closure_enumerated(Q3, s) == closure_bruteforce(Q3, s)


def test_bruteforce_vertices_reject_bad_cross_check():
    # a square with one redundant inequality still passes both paths
    ineqs = (
        ((1, 0), 0),
        ((0, 1), 0),
        ((-1, 0), -1),
        ((0, -1), -1),
        ((1, 1), 0),
    )
    vs = vertices_bruteforce(HPolytope(2, ineqs, ()))
    assert sorted(vs.vertices) == [(0, 0), (0, 1), (1, 0), (1, 1)]
