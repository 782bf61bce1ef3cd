"""Exact integer linear algebra: Hermite/Smith forms, kernels, determinants.

Matrices are plain lists of row lists of ints. A lattice is the row span
of an integer matrix. All algorithms are fraction-free; nothing here ever
touches floats.
"""

from __future__ import annotations


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) = a*x + b*y and g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def mat_identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    """Integer matrix product A @ B."""
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [
        [sum(a_ik * B[k][j] for k, a_ik in enumerate(row) if a_ik) for j in range(cols)]
        for row in A
    ]


def vec_mat(x, A):
    """Row vector times matrix."""
    cols = len(A[0]) if A else 0
    out = [0] * cols
    for xi, row in zip(x, A):
        if xi:
            for j, e in enumerate(row):
                if e:
                    out[j] += xi * e
    return out


def hnf_transform(rows, width=None):
    """Row-style Hermite normal form with transformation matrix.

    Returns (H, U, pivots) where U is unimodular, U @ rows == H, and
    pivots lists the (row, col) pivot positions in order. Pivots are
    positive, entries above a pivot lie in [0, pivot), zero rows sink
    to the bottom.
    """
    m = len(rows)
    if width is None:
        width = len(rows[0]) if m else 0
    H = [list(r) for r in rows]
    U = mat_identity(m)
    pivots = []
    pr = 0  # next pivot row
    for col in range(width):
        src = next((i for i in range(pr, m) if H[i][col]), None)
        if src is None:
            continue
        if src != pr:
            H[pr], H[src] = H[src], H[pr]
            U[pr], U[src] = U[src], U[pr]
        for i in range(pr + 1, m):
            if not H[i][col]:
                continue
            a, b = H[pr][col], H[i][col]
            g, x, y = xgcd(a, b)
            # [[x, y], [-b//g, a//g]] has determinant +1
            p, q = -(b // g), a // g
            H[pr], H[i] = (
                [x * u + y * v for u, v in zip(H[pr], H[i])],
                [p * u + q * v for u, v in zip(H[pr], H[i])],
            )
            U[pr], U[i] = (
                [x * u + y * v for u, v in zip(U[pr], U[i])],
                [p * u + q * v for u, v in zip(U[pr], U[i])],
            )
        if H[pr][col] < 0:
            H[pr] = [-e for e in H[pr]]
            U[pr] = [-e for e in U[pr]]
        piv = H[pr][col]
        for i in range(pr):
            q = H[i][col] // piv
            if q:
                H[i] = [u - q * v for u, v in zip(H[i], H[pr])]
                U[i] = [u - q * v for u, v in zip(U[i], U[pr])]
        pivots.append((pr, col))
        pr += 1
    return H, U, pivots


def hnf_basis(rows, width=None):
    """Canonical basis of the row-span lattice: nonzero rows of the HNF."""
    H, _, pivots = hnf_transform(rows, width)
    return [H[i] for i, _ in pivots]


def rank_int(rows, width=None):
    _, _, pivots = hnf_transform(rows, width)
    return len(pivots)


def left_kernel(rows, width=None):
    """Basis of the integer lattice {x : x @ rows == 0}.

    The basis is complete: every integer solution is an integer
    combination of the returned rows.
    """
    H, U, pivots = hnf_transform(rows, width)
    return [U[i] for i in range(len(pivots), len(rows))]


def row_space_solve(rows, target, width=None):
    """Integer x with x @ rows == target, or None if none exists."""
    H, U, pivots = hnf_transform(rows, width)
    t = list(target)
    coeff = [0] * len(rows)
    for i, col in pivots:
        q, rem = divmod(t[col], H[i][col])
        if rem:
            return None
        if q:
            coeff[i] = q
            t = [u - q * v for u, v in zip(t, H[i])]
    if any(t):
        return None
    return vec_mat(coeff, U)


def row_space_contains(rows, target, width=None):
    return row_space_solve(rows, target, width) is not None


def lattices_equal(rows_a, rows_b, width=None):
    return hnf_basis(rows_a, width) == hnf_basis(rows_b, width)


def lattice_index(sub_rows, sup_rows, width=None):
    """Index [sup : sub] of one lattice inside another of equal rank.

    Raises ValueError if sub is not contained in sup or ranks differ.
    """
    sup = hnf_basis(sup_rows, width)
    coeffs = []
    for v in hnf_basis(sub_rows, width):
        c = row_space_solve(sup, v, width)
        if c is None:
            raise ValueError("not a sublattice")
        coeffs.append(c[: len(sup)])
    if len(coeffs) != len(sup):
        raise ValueError("rank mismatch")
    return abs(det_bareiss(coeffs))


def det_bareiss(mat):
    """Integer determinant by fraction-free Gaussian elimination."""
    n = len(mat)
    if n == 0:
        return 1
    a = [list(r) for r in mat]
    assert all(len(r) == n for r in a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not a[k][k]:
            src = next((i for i in range(k + 1, n) if a[i][k]), None)
            if src is None:
                return 0
            a[k], a[src] = a[src], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inv_unimodular(mat):
    """Exact inverse of a unimodular integer matrix."""
    H, U, pivots = hnf_transform(mat)
    n = len(mat)
    if len(pivots) != n or any(H[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    return U


def snf_transform(mat):
    """Smith normal form with transforms: U @ mat @ V == D.

    D is diagonal with non-negative entries, each dividing the next;
    U and V are unimodular.
    """
    A = [list(r) for r in mat]
    m = len(A)
    n = len(A[0]) if m else 0
    U = mat_identity(m)
    V = mat_identity(n)

    def row_combine(M, T, i, j, col):
        # zero M[j][col] against pivot M[i][col] by a unimodular row op;
        # when the pivot divides the entry, plain elimination (leaving the
        # pivot row alone) guarantees the fixed-point loop makes progress
        a, b = M[i][col], M[j][col]
        if b % a == 0:
            q = b // a
            M[j] = [v - q * u for u, v in zip(M[i], M[j])]
            T[j] = [v - q * u for u, v in zip(T[i], T[j])]
            return
        g, x, y = xgcd(a, b)
        p, q = -(b // g), a // g
        M[i], M[j] = (
            [x * u + y * v for u, v in zip(M[i], M[j])],
            [p * u + q * v for u, v in zip(M[i], M[j])],
        )
        T[i], T[j] = (
            [x * u + y * v for u, v in zip(T[i], T[j])],
            [p * u + q * v for u, v in zip(T[i], T[j])],
        )

    def col_combine(j, k, row):
        # zero A[row][k] against pivot A[row][j]; mirror on V's columns
        a, b = A[row][j], A[row][k]
        if b % a == 0:
            q = b // a
            for M in (A, V):
                for r in M:
                    r[k] -= q * r[j]
            return
        g, x, y = xgcd(a, b)
        p, q = -(b // g), a // g
        for M in (A, V):
            for r in M:
                u, v = r[j], r[k]
                r[j], r[k] = x * u + y * v, p * u + q * v

    t = 0
    while t < min(m, n):
        pos = next(
            ((i, j) for i in range(t, m) for j in range(t, n) if A[i][j]), None
        )
        if pos is None:
            break
        i, j = pos
        if i != t:
            A[t], A[i] = A[i], A[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            for M in (A, V):
                for r in M:
                    r[t], r[j] = r[j], r[t]
        while True:
            for i in range(t + 1, m):
                if A[i][t]:
                    row_combine(A, U, t, i, t)
            for j in range(t + 1, n):
                if A[t][j]:
                    col_combine(t, j, t)
            if any(A[i][t] for i in range(t + 1, m)):
                continue  # column ops may have refilled the pivot column
            piv = A[t][t]
            bad = next(
                (
                    i
                    for i in range(t + 1, m)
                    if any(A[i][j] % piv for j in range(t + 1, n))
                ),
                None,
            )
            if bad is None:
                break
            A[t] = [u + v for u, v in zip(A[t], A[bad])]
            U[t] = [u + v for u, v in zip(U[t], U[bad])]
        if A[t][t] < 0:
            A[t] = [-e for e in A[t]]
            U[t] = [-e for e in U[t]]
        t += 1
    return A, U, V


def snf_diagonal(mat):
    D, _, _ = snf_transform(mat)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def primitive_vector(v):
    """Divide an integer vector by the gcd of its entries (0 stays 0)."""
    from math import gcd

    g = 0
    for e in v:
        g = gcd(g, e)
    if g <= 1:
        return list(v)
    return [e // g for e in v]
