import random

from hypothesis import given, settings
from hypothesis import strategies as st

from mckay.intlinalg import (
    det_bareiss,
    hnf_basis,
    hnf_transform,
    inv_unimodular,
    lattice_index,
    lattices_equal,
    left_kernel,
    mat_identity,
    mat_mul,
    primitive_vector,
    rank_int,
    row_space_contains,
    row_space_solve,
    snf_diagonal,
    snf_transform,
    vec_mat,
    xgcd,
)

small_int = st.integers(min_value=-9, max_value=9)


def matrices(max_dim=5):
    return st.integers(min_value=1, max_value=max_dim).flatmap(
        lambda m: st.integers(min_value=1, max_value=max_dim).flatmap(
            lambda n: st.lists(
                st.lists(small_int, min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def test_xgcd_bezout():
    for a in range(-12, 13):
        for b in range(-12, 13):
            g, x, y = xgcd(a, b)
            assert g == a * x + b * y
            assert g >= 0
            if a or b:
                assert a % g == 0 and b % g == 0


@given(matrices())
@settings(max_examples=120, deadline=None)
def test_hnf_transform_reconstructs(rows):
    H, U, pivots = hnf_transform(rows)
    assert mat_mul(U, rows) == H
    assert abs(det_bareiss(U)) == 1
    # echelon shape: pivot columns strictly increase, zeros below each pivot
    cols = [c for _, c in pivots]
    assert cols == sorted(cols) and len(set(cols)) == len(cols)
    for i, c in pivots:
        assert H[i][c] > 0
        assert all(H[k][c] == 0 for k in range(i + 1, len(H)))
        assert all(0 <= H[k][c] < H[i][c] for k in range(i))
    for i in range(len(pivots), len(H)):
        assert not any(H[i])


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_left_kernel_annihilates_and_is_complete(rows):
    ker = left_kernel(rows)
    n = len(rows[0])
    for x in ker:
        assert vec_mat(x, rows) == [0] * n
    assert len(ker) == len(rows) - rank_int(rows)


def test_row_space_solve_roundtrip():
    rng = random.Random(7)
    for _ in range(60):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
        x = [rng.randint(-4, 4) for _ in range(m)]
        target = vec_mat(x, rows)
        sol = row_space_solve(rows, target)
        assert sol is not None
        assert vec_mat(sol, rows) == target


def test_row_space_solve_rejects_outsiders():
    rows = [[2, 0], [0, 2]]
    assert row_space_solve(rows, [1, 0]) is None
    assert row_space_solve(rows, [2, 2]) is not None
    assert not row_space_contains(rows, [0, 1])


def test_hnf_basis_is_canonical():
    a = [[1, 2, 3], [4, 5, 6]]
    b = [[5, 7, 9], [1, 2, 3], [4, 5, 6]]
    assert lattices_equal(a, b)
    assert hnf_basis(a) == hnf_basis(b)


def test_lattice_index():
    assert lattice_index([[2, 0], [0, 3]], mat_identity(2)) == 6
    assert lattice_index([[1, 1], [1, -1]], mat_identity(2)) == 2


def test_det_bareiss_known_values():
    assert det_bareiss([[3]]) == 3
    assert det_bareiss([[1, 2], [3, 4]]) == -2
    assert det_bareiss([[2, 0, 0], [0, 3, 0], [0, 0, 4]]) == 24
    assert det_bareiss([[1, 2], [2, 4]]) == 0


@given(matrices(4))
@settings(max_examples=80, deadline=None)
def test_snf_transform(rows):
    D, U, V = snf_transform(rows)
    assert mat_mul(mat_mul(U, rows), V) == D
    assert abs(det_bareiss(U)) == 1 and abs(det_bareiss(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    for i in range(len(D)):
        for j in range(len(D[0])):
            if i != j:
                assert D[i][j] == 0
    for a, b in zip(diag, diag[1:]):
        if a:
            assert b % a == 0
        else:
            assert b == 0
    assert all(d >= 0 for d in diag)


def test_snf_diagonal_known():
    assert snf_diagonal([[2, 0], [0, 2]]) == [2, 2]
    assert snf_diagonal([[1, 0], [0, 6]]) == [1, 6]
    # Z^2 / <(2,0),(0,3)> is cyclic of order 6
    assert snf_diagonal([[2, 0], [0, 3]]) == [1, 6]


def test_inv_unimodular():
    M = [[1, 2], [1, 3]]
    Minv = inv_unimodular(M)
    assert mat_mul(M, Minv) == mat_identity(2)
    assert mat_mul(Minv, M) == mat_identity(2)


def test_primitive_vector():
    assert primitive_vector([2, 4, -6]) == [1, 2, -3]
    assert primitive_vector([0, 0]) == [0, 0]
    assert primitive_vector([-3, 0]) == [-1, 0]
    assert primitive_vector([5]) == [1]
