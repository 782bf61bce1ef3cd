import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mckay.quiver import build_mckay_cyclic
from mckay.flows import ZetaVector
from mckay.closure import cycle_closure, is_ic
from mckay.trees import (
    admissible_cone,
    admissible_ic_trees,
    admissible_trees,
    canonical_translate,
    chamber_scan,
    closed_admissible_trees,
    enumerate_ic_trees,
    enumerate_spanning_trees,
    is_generic,
    spanning_tree_count,
    translate_tree,
    tree_adjacency,
    tree_flow,
)
from mckay.toric import classify_cone, tangent_cone

Q2 = build_mckay_cyclic(2, [1, 1])
Q3 = build_mckay_cyclic(3, [1, 1, 1])
Q5 = build_mckay_cyclic(5, [1, 2, 3])

# the tree through the vertex whose type totals are (1, 3, 1)
T131 = (0, 4, 8, 10)
Z131 = (-1, -1, -1, -1, 4)
Z9 = (9, 8, -3, -2, -12)

ALL_Q5_TREES = sorted(enumerate_spanning_trees(Q5))


def sum_zero(vals):
    return ZetaVector(list(vals) + [-sum(vals)])


def test_two_vertex_quiver_has_four_trees():
    trees = list(enumerate_spanning_trees(Q2))
    assert sorted(trees) == [(0,), (1,), (2,), (3,)]
    assert spanning_tree_count(Q2) == 4


def test_triple_edge_triangle_has_27_trees():
    trees = list(enumerate_spanning_trees(Q3))
    assert len(trees) == 27
    assert spanning_tree_count(Q3) == 27
    assert len(set(trees)) == 27
    for T in trees:
        assert len(T) == 2
        assert tree_adjacency(Q3, T) is not None


def test_determinant_count_matches_enumeration_on_605():
    # the enumerator asserts against the determinant internally too
    assert spanning_tree_count(Q5) == 605
    assert sum(1 for _ in enumerate_spanning_trees(Q5)) == 605


def test_disconnected_quiver_rejected():
    q = build_mckay_cyclic(4, [2, 2], allow_nonfree=True)
    with pytest.raises(ValueError):
        list(enumerate_spanning_trees(q))


def test_tree_flow_zero_boundary_is_zero():
    for T in enumerate_spanning_trees(Q3):
        f = tree_flow(Q3, T, (0, 0, 0))
        assert all(f[b] == 0 for b in T)


def test_tree_flow_rejects_non_trees():
    with pytest.raises(ValueError):
        # arrows 0 -> 4, 1 -> 4, 1 -> 0 close a triangle
        tree_flow(Q5, (0, 2, 3, 4), (1, 1, 1, 1, -4))
    with pytest.raises(ValueError):
        tree_flow(Q5, (0, 1, 2), Z131)   # too few arrows


def test_vertex_131_tree_values():
    f = tree_flow(Q5, T131, Z131)
    assert [f[b] for b in T131] == [1, 2, 1, 1]
    assert sorted(f[b] for b in T131) == [1, 1, 1, 2]
    assert all(f[b] >= 0 for b in T131)


def test_vertex_131_tree_cone_forms():
    # cuts of the star at vertex 4 plus the chord 3 -> 1
    ac = admissible_cone(Q5, T131)
    assert ac.tree == T131
    assert set(ac.forms) == {
        (-1, 0, 0, 0, 0),
        (0, 0, -1, 0, 0),
        (0, 0, 0, -1, 0),
        (0, -1, 0, -1, 0),
    }
    vals = [sum(c * z for c, z in zip(form, Z131)) for form in ac.forms]
    assert sorted(vals) == [1, 1, 1, 2]


def test_path_tree_forms_are_prefix_sums():
    # type-1 path: arrow k+1 -> k carries the demand of 0..k
    path = tuple(3 * (k + 1) for k in range(4))
    ac = admissible_cone(Q5, path)
    rng = random.Random(7)
    for _ in range(20):
        z = sum_zero([rng.randint(-9, 9) for _ in range(4)])
        for k, form in enumerate(ac.forms):
            got = sum(c * z[v] for v, c in enumerate(form))
            assert got == sum(z[j] for j in range(k + 1))


def test_two_vertex_cone_forms_are_signed_head_demands():
    for b in range(4):
        (form,) = admissible_cone(Q2, (b,)).forms
        head = Q2.arrows[b].head
        z = (5, -5)
        assert sum(c * x for c, x in zip(form, z)) == z[head]


def test_forms_match_flow_values_everywhere():
    rng = random.Random(3)
    trees = list(enumerate_spanning_trees(Q5))
    for _ in range(25):
        T = rng.choice(trees)
        ac = admissible_cone(Q5, T)
        z = sum_zero([rng.randint(-6, 6) for _ in range(4)])
        f = tree_flow(Q5, T, z)
        for b, form in zip(ac.tree, ac.forms):
            assert f[b] == sum(c * z[v] for v, c in enumerate(form))


def test_ic_census_on_155():
    reduced = enumerate_ic_trees(Q5, reduce_by_symmetry=True)
    unreduced = enumerate_ic_trees(Q5)
    assert len(reduced) == 55
    assert len(unreduced) == 275
    # translation acts freely here, so orbits all have full size
    orbit_sizes = []
    for T in reduced:
        orbit = {translate_tree(Q5, T, g) for g in range(5)}
        assert orbit <= set(unreduced)
        orbit_sizes.append(len(orbit))
    assert sum(orbit_sizes) == len(unreduced)
    assert set(orbit_sizes) == {5}


def test_ic_census_on_triple_triangle():
    reduced = enumerate_ic_trees(Q3, reduce_by_symmetry=True)
    assert reduced == [(0, 3), (1, 4), (2, 5)]
    for T in reduced:
        types = {Q3.arrows[b].type for b in T}
        assert len(types) == 1   # two arrows of one type


def test_reduced_representatives_are_canonical():
    for T in enumerate_ic_trees(Q5, reduce_by_symmetry=True):
        assert canonical_translate(Q5, T) == T
        assert is_ic(Q5, frozenset(T))


def test_translate_tree_is_a_group_action():
    T = T131
    assert translate_tree(Q5, T, 0) == T
    for g in range(5):
        for h in range(5):
            one = translate_tree(Q5, translate_tree(Q5, T, g), h)
            assert one == translate_tree(Q5, T, (g + h) % 5)


def test_admissible_ic_trees_includes_131_vertex():
    pairs = admissible_ic_trees(Q5, Z131)
    trees = [t for t, _ in pairs]
    assert T131 in trees
    fl = dict(pairs)[T131]
    image = [0, 0, 0]
    for b in T131:
        image[Q5.arrows[b].type - 1] += fl[b]
    assert image == [1, 3, 1]


def test_admissible_ic_trees_at_zero_all_equivalent():
    pairs = admissible_ic_trees(Q5, (0, 0, 0, 0, 0))
    assert len(pairs) == 275
    for tree, flow in pairs:
        assert all(flow[b] == 0 for b in tree)
    # zero flow has empty support, so one class only: the cone apex
    supports = {tuple(b for b in t if f[b] > 0) for t, f in pairs}
    assert supports == {()}


def test_nine_closure_classes_at_z9():
    pairs = admissible_ic_trees(Q5, Z9)
    keys = {tuple(sorted(cycle_closure(Q5, frozenset(t)))) for t, _ in pairs}
    assert len(keys) == 9


def test_is_generic_examples():
    assert is_generic(ZetaVector(Z131))
    assert not is_generic(ZetaVector((1, -1, 0, 0, 0)))
    assert is_generic(ZetaVector(Z9))
    assert not is_generic(ZetaVector((2, -1, -1, 3, -3)))


def test_pivot_walk_matches_exhaustive_filter():
    for z in (Z131, Z9, (1, 2, -4, 7, -6)):
        walked = admissible_trees(Q5, z)
        brute = []
        for T in enumerate_spanning_trees(Q5):
            f = tree_flow(Q5, T, z)
            if all(f[b] >= 0 for b in T):
                brute.append((tuple(sorted(T)), {b: f[b] for b in T}))
        assert walked == sorted(brute)
        for _, flow in walked:
            assert all(v > 0 for v in flow.values())   # generic: no zeros


def test_pivot_walk_requires_generic_weights():
    with pytest.raises(ValueError):
        admissible_trees(Q5, (1, -1, 0, 0, 0))


def test_closed_admissible_trees_degenerate_fallback():
    z = (1, -1, 0, 0, 0)
    pairs = closed_admissible_trees(Q5, z)
    brute = []
    for T in enumerate_spanning_trees(Q5):
        f = tree_flow(Q5, T, z)
        if all(f[b] >= 0 for b in T):
            brute.append((tuple(sorted(T)), {b: f[b] for b in T}))
    assert pairs == sorted(brute)
    assert len(pairs) > 0


def test_chamber_scan_separates_the_two_sample_weights():
    def classify(q, S):
        return classify_cone(tangent_cone(q, S)).kind

    report = chamber_scan(Q5, [Z131, Z9], classify=classify)
    assert len(report.chambers) == 2
    assert report.warnings == ()
    by_euler = {c[2]: c for c in report.chambers}
    assert set(by_euler) == {9, 10}
    smooth_tags = by_euler[9][3]["classification"]
    assert set(smooth_tags) == {"smooth"}
    mixed_tags = by_euler[10][3]["classification"]
    assert mixed_tags.count("quadric-cone") == 1
    assert mixed_tags.count("smooth") == 9


def test_chamber_scan_groups_scaled_weights():
    scaled = tuple(4 * x for x in Z131)
    report = chamber_scan(Q5, [Z131, scaled, Z9])
    assert len(report.chambers) == 2
    sizes = sorted(len(c[1]) for c in report.chambers)
    assert sizes == [1, 2]
    together = next(c for c in report.chambers if len(c[1]) == 2)
    assert set(together[1]) == {Z131, scaled}


def test_chamber_scan_single_sample():
    report = chamber_scan(Q5, [Z9])
    assert len(report.chambers) == 1
    assert report.chambers[0][2] == 9


def test_chamber_scan_warns_on_degenerate_sample():
    report = chamber_scan(Q5, [(1, -1, 0, 0, 0), Z9])
    assert len(report.warnings) == 1
    assert "not generic" in report.warnings[0]
    assert len(report.chambers) == 1


@given(st.lists(st.integers(-30, 30), min_size=4, max_size=4),
       st.integers(0, 604))
@settings(max_examples=60, deadline=None)
def test_tree_flow_boundary_is_exact(head, index):
    z = sum_zero(head)
    trees = ALL_Q5_TREES
    T = trees[index % len(trees)]
    f = tree_flow(Q5, T, z)
    for v in range(5):
        net = sum(f[b] for b in T if Q5.arrows[b].head == v) \
            - sum(f[b] for b in T if Q5.arrows[b].tail == v)
        assert net == z[v]


@given(st.lists(st.integers(-8, 8), min_size=4, max_size=4),
       st.integers(0, 604))
@settings(max_examples=60, deadline=None)
def test_closed_cone_membership_matches_flow_sign(head, index):
    z = sum_zero(head)
    T = ALL_Q5_TREES[index % len(ALL_Q5_TREES)]
    ac = admissible_cone(Q5, T)
    in_cone = all(sum(c * z[v] for v, c in enumerate(form)) >= 0
                  for form in ac.forms)
    f = tree_flow(Q5, T, z)
    assert in_cone == all(f[b] >= 0 for b in T)
