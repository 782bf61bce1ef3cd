import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mckay.intlinalg import row_space_contains
from mckay.quiver import build_mckay_abelian, build_mckay_cyclic
from mckay.flows import (
    Flow,
    ZetaVector,
    boundary,
    check_exactness,
    commutation_generators,
    decompose_conformal,
    flow_kernel_basis,
    lattice_pi,
    path_between,
    path_flow,
    seq_endpoint,
    seq_to_flow,
    single_cycle_form,
    solve_flow,
    type_of,
)

Q5 = build_mckay_cyclic(5, [1, 2, 3])
Q7 = build_mckay_cyclic(7, [1, 2, 3])


def test_zeta_sum_enforced():
    with pytest.raises(ValueError):
        ZetaVector([1, 0, 0])
    z = ZetaVector([1, -1, 0])
    assert z[0] == 1 and len(z) == 3 and z.is_integral()
    assert ZetaVector([Fraction(1, 2), Fraction(-1, 2)]).is_integral() is False


def test_boundary_single_arrow():
    for a in Q5.arrows:
        b = boundary(Flow(Q5, {a.id: 1}))
        want = [0] * 5
        want[a.head] += 1
        want[a.tail] -= 1
        assert list(b.values) == want


def test_type_of_single_arrow():
    for a in Q5.arrows:
        t = type_of(Flow(Q5, {a.id: 1}))
        assert t[a.type - 1] == 1 and sum(map(abs, t)) == 1


def test_written_out_sequence_on_7_123():
    f = seq_to_flow(Q7, 0, [1, 1, 2, 1, 1, -3, -3])
    assert type_of(f) == [4, 1, -2]
    assert boundary(f).is_zero()


def test_sequence_boundary_on_11_124():
    q = build_mckay_cyclic(11, [1, 2, 4])
    f = seq_to_flow(q, 0, [1, 1, 3, -2, 1, 3, -1, -1])
    want = [0] * 11
    want[4] += 1
    want[0] -= 1
    assert list(boundary(f).values) == want


def test_inverse_pair_cancels():
    for v in range(5):
        for j in (1, 2, 3):
            assert not seq_to_flow(Q5, v, [j, -j])
            assert not seq_to_flow(Q5, v, [-j, j])


def test_closed_sequence_sum_of_weights():
    f = seq_to_flow(Q5, 0, [1, 1, 1, 2])
    assert boundary(f).is_zero()  # 1+1+1+2 = 5


seq_entries = st.lists(
    st.sampled_from([1, 2, 3, -1, -2, -3]), min_size=0, max_size=8
)


@given(st.integers(0, 6), seq_entries)
@settings(max_examples=150, deadline=None)
def test_boundary_is_endpoint_difference(base, seq):
    f = seq_to_flow(Q7, base, seq)
    end = seq_endpoint(Q7, base, seq)
    want = [0] * 7
    want[end] += 1
    want[base] -= 1
    assert list(boundary(f).values) == want


@given(st.integers(0, 6), seq_entries, seq_entries)
@settings(max_examples=100, deadline=None)
def test_concatenation_adds(base, seq_a, seq_b):
    mid = seq_endpoint(Q7, base, seq_a)
    whole = seq_to_flow(Q7, base, list(seq_a) + list(seq_b))
    assert whole == seq_to_flow(Q7, base, seq_a) + seq_to_flow(Q7, mid, seq_b)


@given(st.integers(0, 6), seq_entries)
@settings(max_examples=150, deadline=None)
def test_cyclic_rotation_of_closed_sequences(base, seq):
    if not seq or seq_endpoint(Q7, base, seq) != base:
        return
    j = seq[0]
    base2 = seq_endpoint(Q7, base, [j])
    rotated = list(seq[1:]) + [j]
    assert seq_to_flow(Q7, base, seq) == seq_to_flow(Q7, base2, rotated)


def _random_cycle_flow(q, rng):
    f = Flow(q)
    gens = commutation_generators(q)
    for _ in range(rng.randrange(1, 5)):
        f = f + rng.randint(-2, 2) * gens[rng.randrange(len(gens))]
    if rng.random() < 0.5:
        f = f + rng.randint(1, 2) * seq_to_flow(
            q, rng.randrange(q.num_vertices), [1] * q.r
        )
    return f


def test_conformal_decomposition_properties():
    rng = random.Random(11)
    tested = 0
    while tested < 80:
        f = _random_cycle_flow(Q7, rng)
        if not f:
            continue
        tested += 1
        parts = decompose_conformal(f)
        total = Flow(Q7)
        for coeff, cyc in parts:
            assert coeff > 0
            assert cyc.is_cycle()
            assert cyc.positive_part() <= f.positive_support()
            assert cyc.negative_part() <= f.negative_support()
            total = total + coeff * path_flow(cyc)
        assert total == f
        for i, (_, ci) in enumerate(parts):
            for j, (_, cj) in enumerate(parts):
                if i != j:
                    assert not (ci.positive_part() & cj.negative_part())


def test_conformal_decomposition_trivial_cases():
    cyc = seq_to_flow(Q5, 0, [2, 3])  # 2-cycle: 2 + 3 = 5
    assert boundary(cyc).is_zero()
    parts = decompose_conformal(cyc)
    assert len(parts) == 1 and parts[0][0] == 1
    parts = decompose_conformal(2 * cyc)
    assert len(parts) == 1 and parts[0][0] == 2
    with pytest.raises(ValueError):
        decompose_conformal(Flow(Q5, {0: 1}))


def test_conformal_decomposition_cancels_shared_arrow():
    # two unit cycles sharing one arrow in opposite directions re-split
    a = seq_to_flow(Q5, 0, [2, 3])
    b = -1 * seq_to_flow(Q5, 0, [2, 1, 1, 1])  # shares the type-2 arrow at 0
    f = a + b
    assert boundary(f).is_zero()
    assert f[Q5.arrow_id(0, 2)] == 0
    parts = decompose_conformal(f)
    rebuilt = Flow(Q5)
    pos = set()
    for coeff, cyc in parts:
        rebuilt = rebuilt + coeff * path_flow(cyc)
        pos |= cyc.positive_part()
    assert rebuilt == f
    assert pos == f.positive_support()


def test_path_between_basic_and_extra_cycle():
    a = Q5.arrows[Q5.arrow_id(0, 1)]
    p = path_between(Flow(Q5, {a.id: 1}))
    assert p.steps == ((a.id, 1),)
    # parallel arrows tail-to-tail and head-to-head: use one reversed
    q3 = build_mckay_cyclic(3, [1, 1, 1])
    f = Flow(q3, {q3.arrow_id(0, 1): 1, q3.arrow_id(0, 2): -1})
    assert not boundary(f).is_zero() or True
    # boundary of chi_a - chi_b with parallel arrows is zero; use different
    # vertices instead: 0 ->(1) 2, then 2 ->(1) 1 gives a two-arrow path
    f = Flow(q3, {q3.arrow_id(0, 1): 1, q3.arrow_id(2, 1): 1})
    p = path_between(f)
    assert (p.tail, p.head) == (0, 1)
    # an extra disjoint cycle does not disturb the endpoints
    extra = seq_to_flow(Q7, 0, [1, 2, 3, 1])  # 1+2+3+1 = 7: closed
    assert boundary(extra).is_zero()
    g = Flow(Q7, {Q7.arrow_id(3, 1): 1}) + extra
    p = path_between(g)
    assert (p.tail, p.head) == (3, 2)


def test_single_cycle_form_roundtrip():
    rng = random.Random(5)
    tested = 0
    while tested < 60:
        f = _random_cycle_flow(Q7, rng)
        if not f:
            continue
        tested += 1
        base, seq = single_cycle_form(f)
        assert seq_to_flow(Q7, base, seq) == f
        assert seq_endpoint(Q7, base, seq) == base
    assert single_cycle_form(Flow(Q7)) == (0, ())


def test_lattice_pi_5_123():
    pi = lattice_pi(Q5)
    assert pi.index_in_ambient() == 5
    for v in [(1, 2, 0), (0, 1, 1), (2, -1, 0)]:
        assert pi.contains(v)
    assert not pi.contains((1, 0, 0))
    # every basis vector satisfies the congruence
    for row in pi.rows:
        assert (row[0] + 2 * row[1] + 3 * row[2]) % 5 == 0


def test_lattice_pi_3_111():
    pi = lattice_pi(build_mckay_cyclic(3, [1, 1, 1]))
    assert pi.index_in_ambient() == 3
    for v in [(3, 0, 0), (1, -1, 0), (0, 1, -1)]:
        assert pi.contains(v)


def test_lattice_pi_trivial():
    from mckay.quiver import GroupAction

    pi = lattice_pi(GroupAction([(1, [0, 0, 0])]))
    assert pi.rank == 3 and pi.index_in_ambient() == 1


def test_solve_flow_examples():
    f = solve_flow([0, 0, 0], [0] * 5, Q5)
    assert not f
    f = solve_flow([1, 2, 0], [0] * 5, Q5)
    assert type_of(f) == [1, 2, 0] and boundary(f).is_zero()
    # boundary chi_{v-1} - chi_v with x = e1 gives the single type-1 arrow
    z = [0] * 5
    z[3] = 1
    z[4] = -1
    f = solve_flow([1, 0, 0], z, Q5)
    assert f == Flow(Q5, {Q5.arrow_id(4, 1): 1})


def test_solve_flow_postconditions_random():
    rng = random.Random(17)
    for _ in range(60):
        x = [rng.randint(-4, 4) for _ in range(3)]
        z = [rng.randint(-3, 3) for _ in range(7)]
        z[-1] -= sum(z)
        obstruction = (
            x[0] * 1 + x[1] * 2 + x[2] * 3 + sum(v * z[v] for v in range(7))
        ) % 7
        x[0] -= obstruction  # repair using the invertible weight 1
        f = solve_flow(x, z, Q7)
        assert type_of(f) == x
        assert list(boundary(f).values) == z


def test_solve_flow_obstruction_raises():
    with pytest.raises(ValueError):
        solve_flow([1, 0, 0], [0] * 5, Q5)


def test_solve_flow_first_weight_not_one():
    q = build_mckay_cyclic(5, [2, 3, 4])
    f = solve_flow([5, 0, 0], [0] * 5, q)
    assert type_of(f) == [5, 0, 0] and boundary(f).is_zero()


def test_solve_flow_product_quiver():
    qp = build_mckay_abelian([(2, [1, 1]), (2, [1, 1])])
    f = solve_flow([1, 1, 1, 0], [1, -1, 0, 0], qp)
    assert type_of(f) == [1, 1, 1, 0]
    assert list(boundary(f).values) == [1, -1, 0, 0]


def test_check_exactness_small_cases():
    for r, w in [(5, [1, 2, 3]), (2, [1, 1]), (3, [1, 1, 1])]:
        q = build_mckay_cyclic(r, w)
        rep = check_exactness(q)
        assert rep["all_pass"], rep
        assert rep["commutation_rank"] == (q.n - 1) * (r - 1)
        assert rep["cokernel_order"] == r


def test_check_exactness_product():
    rep = check_exactness(build_mckay_abelian([(2, [1, 1]), (2, [1, 1])]))
    assert rep["all_pass"] and rep["cokernel_order"] == 4


def test_permutation_invariance_mod_commutation():
    rng = random.Random(23)
    gens = [g.as_vector() for g in commutation_generators(Q7)]
    tested = 0
    while tested < 40:
        v = rng.randrange(7)
        seq = [rng.choice([1, 2, 3, -1, -2, -3]) for _ in range(rng.randrange(2, 7))]
        if seq_endpoint(Q7, v, seq) != v:
            continue
        tested += 1
        perm = seq[:]
        rng.shuffle(perm)
        d = seq_to_flow(Q7, v, perm) - seq_to_flow(Q7, v, seq)
        if d:
            assert row_space_contains(gens, d.as_vector())


def test_flow_kernel_is_commutation_lattice():
    ker = flow_kernel_basis(Q5)
    assert len(ker) == (Q5.n - 1) * (5 - 1)
    for row in ker:
        f = Flow(Q5, dict(enumerate(row)))
        assert boundary(f).is_zero() and type_of(f) == [0, 0, 0]
