"""Flows on a quiver: boundary and type maps, sequential flow expressions,
conformal decomposition, and the integer lattices these maps cut out.
"""

from __future__ import annotations

from fractions import Fraction

from .intlinalg import (
    det_bareiss,
    hnf_basis,
    left_kernel,
    lattices_equal,
    rank_int,
    row_space_solve,
    vec_mat,
)
from .quiver import GroupAction, Path, Quiver, cycle_canonical


class ZetaVector:
    """Exact vector on the vertices with total sum zero."""

    __slots__ = ("values",)

    def __init__(self, values):
        vals = []
        for x in values:
            if not isinstance(x, (int, Fraction)):
                raise TypeError(f"exact value required, got {type(x).__name__}")
            vals.append(x)
        if sum(vals) != 0:
            raise ValueError(f"values must sum to zero, got sum {sum(vals)}")
        self.values = tuple(vals)

    def __getitem__(self, v):
        return self.values[v]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other):
        if isinstance(other, ZetaVector):
            other = other.values
        return list(self.values) == list(other)

    def __hash__(self):
        return hash(self.values)

    def is_integral(self):
        return all(
            isinstance(x, int) or x.denominator == 1 for x in self.values
        )

    def is_zero(self):
        return not any(self.values)

    def __repr__(self):
        return f"ZetaVector({list(self.values)})"

    def to_json_dict(self):
        return {"values": [_num_to_json(x) for x in self.values]}


def _num_to_json(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Flow:
    """Exact flow: a finitely supported map arrow id -> number."""

    __slots__ = ("quiver", "values")

    def __init__(self, quiver, values=None):
        self.quiver = quiver
        vals = {}
        if values:
            items = values.items() if hasattr(values, "items") else values
            for a, x in items:
                if x:
                    vals[int(a)] = vals.get(int(a), 0) + x
                    if not vals[int(a)]:
                        del vals[int(a)]
        self.values = vals

    def __getitem__(self, a):
        return self.values.get(a, 0)

    def __bool__(self):
        return bool(self.values)

    def __eq__(self, other):
        return (
            isinstance(other, Flow)
            and self.quiver is other.quiver
            and self.values == other.values
        )

    def __add__(self, other):
        out = dict(self.values)
        for a, x in other.values.items():
            y = out.get(a, 0) + x
            if y:
                out[a] = y
            else:
                out.pop(a, None)
        f = Flow(self.quiver)
        f.values = out
        return f

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        f = Flow(self.quiver)
        f.values = {a: -x for a, x in self.values.items()}
        return f

    def __rmul__(self, c):
        f = Flow(self.quiver)
        if c:
            f.values = {a: c * x for a, x in self.values.items()}
        return f

    def support(self):
        return set(self.values)

    def positive_support(self):
        return {a for a, x in self.values.items() if x > 0}

    def negative_support(self):
        return {a for a, x in self.values.items() if x < 0}

    def is_integral(self):
        return all(
            isinstance(x, int) or x.denominator == 1 for x in self.values.values()
        )

    def norm1(self):
        return sum(abs(x) for x in self.values.values())

    def boundary(self):
        vals = [0] * self.quiver.num_vertices
        for a, x in self.values.items():
            arr = self.quiver.arrows[a]
            vals[arr.head] += x
            vals[arr.tail] -= x
        return ZetaVector(vals)

    def type_vector(self):
        t = [0] * self.quiver.n
        for a, x in self.values.items():
            t[self.quiver.arrows[a].type - 1] += x
        return t

    def as_vector(self):
        return [self.values.get(a, 0) for a in range(len(self.quiver.arrows))]

    @classmethod
    def from_vector(cls, quiver, vec):
        return cls(quiver, dict(enumerate(vec)))

    def __repr__(self):
        items = ", ".join(f"{a}:{x}" for a, x in sorted(self.values.items()))
        return f"Flow({{{items}}})"

    def to_json_dict(self):
        return {
            "values": {
                str(a): _num_to_json(x) for a, x in sorted(self.values.items())
            }
        }


def boundary(f):
    """Net inflow minus outflow at every vertex."""
    return f.boundary()


def type_of(f):
    """Per-type totals of a flow, as a vector of length n."""
    return f.type_vector()


def path_flow(path):
    """The signed indicator flow of a walk (+1 per forward traversal)."""
    return Flow(path.quiver, ((a, s) for a, s in path.steps))


# -- sequential flow expressions ----------------------------------------


def seq_endpoint(q, base, seq):
    """Endpoint of a signed type sequence started at base."""
    cur = base
    for j in seq:
        if j > 0:
            cur = q.vertex_sub(cur, q.type_shifts[j - 1])
        else:
            cur = q.vertex_add(cur, q.type_shifts[-j - 1])
    return cur


def seq_to_flow(q, base, seq):
    """Flow of the sequential expression: entry +j walks the type-j arrow
    out of the current vertex, entry -j walks the type-j arrow into it,
    each contributing +1 or -1 on that arrow."""
    cur = base
    items = []
    for j in seq:
        if not isinstance(j, int) or j == 0 or abs(j) > q.n:
            raise ValueError(f"bad type index {j}")
        if j > 0:
            items.append((q.arrow_id(cur, j), 1))
            cur = q.vertex_sub(cur, q.type_shifts[j - 1])
        else:
            nxt = q.vertex_add(cur, q.type_shifts[-j - 1])
            items.append((q.arrow_id(nxt, -j), -1))
            cur = nxt
    return Flow(q, items)


def seq_to_path(q, base, seq):
    """The walk traced by a sequential expression (requires no immediate
    backtracking, which would repeat an arrow on consecutive steps)."""
    cur = base
    steps = []
    for j in seq:
        if j > 0:
            steps.append((q.arrow_id(cur, j), 1))
            cur = q.vertex_sub(cur, q.type_shifts[j - 1])
        else:
            nxt = q.vertex_add(cur, q.type_shifts[-j - 1])
            steps.append((q.arrow_id(nxt, -j), -1))
            cur = nxt
    return Path(q, steps, base=base)


def path_to_seq(path):
    """Signed type sequence reading off a walk; base is the walk's tail."""
    q = path.quiver
    return path.tail, tuple(
        q.type_of_arrow(a) if s == 1 else -q.type_of_arrow(a)
        for a, s in path.steps
    )


# -- conformal decomposition and friends ---------------------------------


def _aligned_out(q, g, v):
    """Arrows usable out of v when traversing along the sign of g."""
    for a in q.out_arrows(v):
        if g.get(a.id, 0) > 0:
            yield a.id, 1, a.head
    for a in q.in_arrows(v):
        if g.get(a.id, 0) < 0:
            yield a.id, -1, a.tail


def decompose_conformal(f):
    """Write a boundaryless flow as positive combinations of cycle flows.

    The cycles are traced along the signs of f, so their orientations
    agree pairwise and their parts sit inside the matching parts of f.
    Integral input gives integral coefficients. Deterministic: smallest
    arrow id wins every choice.
    """
    if not f.boundary().is_zero():
        raise ValueError("flow has nonzero boundary")
    q = f.quiver
    g = dict(f.values)
    out = []
    while g:
        a0 = min(g)
        arr = q.arrows[a0]
        sign = 1 if g[a0] > 0 else -1
        steps = [(a0, sign)]
        start = arr.tail if sign == 1 else arr.head
        cur = arr.head if sign == 1 else arr.tail
        seen = {start: 0, cur: 1} if cur != start else {start: 0}
        while cur != start:
            aid, s, nxt = min(_aligned_out(q, g, cur))
            steps.append((aid, s))
            if nxt in seen:
                steps = steps[seen[nxt]:]
                start = nxt
                break
            seen[nxt] = len(steps)
            cur = nxt
        coeff = min(abs(g[a]) for a, _ in steps)
        for a, s in steps:
            g[a] -= coeff * s
            if not g[a]:
                del g[a]
        # rotate only: reflection would reverse the cycle's orientation
        canon = min(tuple(steps[i:] + steps[:i]) for i in range(len(steps)))
        base = (
            q.arrows[canon[0][0]].tail
            if canon[0][1] == 1
            else q.arrows[canon[0][0]].head
        )
        out.append((coeff, Path(q, canon, base=base)))
    return out


def path_between(f):
    """Recover a walk from v to v' out of an integral flow whose boundary
    is the difference of their vertex indicators, using only flow-aligned
    steps."""
    if not f.is_integral():
        raise ValueError("integral flow required")
    b = f.boundary()
    src = [v for v, x in enumerate(b) if x == -1]
    dst = [v for v, x in enumerate(b) if x == 1]
    if len(src) != 1 or len(dst) != 1 or any(x not in (-1, 0, 1) for x in b):
        raise ValueError("boundary is not a difference of two vertex indicators")
    q = f.quiver
    v, target = src[0], dst[0]
    g = {a: int(x) for a, x in f.values.items()}
    steps = []
    cur = v
    while cur != target:
        aid, s, nxt = min(_aligned_out(q, g, cur))
        steps.append((aid, s))
        g[aid] -= s
        if not g[aid]:
            del g[aid]
        cur = nxt
    return Path(q, steps, base=v)


def _directed_type_path(q, u, v):
    """Signed type sequence of a forward-arrow walk from u to v (BFS)."""
    if u == v:
        return []
    prev = {u: None}
    queue = [u]
    while queue:
        nq = []
        for w in queue:
            for a in q.out_arrows(w):
                if a.head not in prev:
                    prev[a.head] = (w, a.type)
                    if a.head == v:
                        seq = []
                        x = v
                        while prev[x] is not None:
                            x, t = prev[x]
                            seq.append(t)
                        return list(reversed(seq))
                    nq.append(a.head)
        queue = nq
    raise ValueError("no forward path between the vertices")


def single_cycle_form(f):
    """A sequential expression evaluating to the given boundaryless flow.

    The conformal pieces are spliced with connector sequences traversed
    out and back, so the whole expression is one closed sequence from a
    single base vertex.
    """
    if not f.is_integral():
        raise ValueError("integral flow required")
    parts = decompose_conformal(f)
    q = f.quiver
    if not parts:
        return 0, ()
    base = parts[0][1].tail
    seq = []
    for coeff, cyc in parts:
        gamma = _directed_type_path(q, base, cyc.tail)
        _, cseq = path_to_seq(cyc)
        seq.extend(gamma)
        seq.extend(list(cseq) * int(coeff))
        seq.extend(-j for j in reversed(gamma))
    return base, tuple(seq)


# -- lattices -------------------------------------------------------------


class LatticeBasis:
    """A sublattice of some Z^d, held as a canonical (Hermite) basis."""

    __slots__ = ("ambient", "rows")

    def __init__(self, rows, ambient):
        self.ambient = ambient
        self.rows = tuple(tuple(r) for r in hnf_basis(list(rows), ambient))

    @property
    def rank(self):
        return len(self.rows)

    def solve(self, v):
        """Integer coefficients over the basis rows, or None."""
        if not self.rows:
            return None if any(v) else []
        c = row_space_solve([list(r) for r in self.rows], list(v), self.ambient)
        return None if c is None else c[: len(self.rows)]

    def contains(self, v):
        return self.solve(v) is not None

    def index_in_ambient(self):
        """Index inside Z^ambient; only defined at full rank."""
        if self.rank != self.ambient:
            raise ValueError("lattice is not full rank")
        return abs(det_bareiss([list(r) for r in self.rows]))

    def __eq__(self, other):
        return (
            isinstance(other, LatticeBasis)
            and self.ambient == other.ambient
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"LatticeBasis(rank {self.rank} in Z^{self.ambient})"


def lattice_pi(action):
    """The sublattice of type vectors whose weighted sums vanish in the
    acting group: one congruence per cyclic factor."""
    if isinstance(action, Quiver):
        action = action.live_action()
    if not isinstance(action, GroupAction):
        action = GroupAction(action, allow_nonfree=True)
    N = action.weight_count
    congs = action.congruences()
    F = len(congs)
    M = [[0] * F for _ in range(N + F)]
    for k, (r, slots, ws) in enumerate(congs):
        for i, w in zip(slots, ws):
            M[i][k] = w
        M[N + k][k] = r
    rows = [x[:N] for x in left_kernel(M)]
    return LatticeBasis(rows, N)


def type_boundary_rows(q):
    """Per-arrow rows of the combined type-and-boundary map."""
    n, m = q.n, q.num_vertices
    rows = []
    for a in q.arrows:
        row = [0] * (n + m)
        row[a.type - 1] += 1
        row[n + a.head] += 1
        row[n + a.tail] -= 1
        rows.append(row)
    return rows


def incidence_rows(q):
    rows = []
    for a in q.arrows:
        row = [0] * q.num_vertices
        row[a.head] += 1
        row[a.tail] -= 1
        rows.append(row)
    return rows


def flow_kernel_basis(q):
    """Integer basis of the flows with zero type and zero boundary."""
    return left_kernel(type_boundary_rows(q))


def commutation_generators(q):
    """The four-arrow commutation flows: go type i then j, minus j then i,
    from every vertex and every unordered type pair."""
    gens = []
    for v in range(q.num_vertices):
        for i in range(1, q.n + 1):
            vi = q.vertex_sub(v, q.type_shifts[i - 1])
            for j in range(i + 1, q.n + 1):
                vj = q.vertex_sub(v, q.type_shifts[j - 1])
                f = Flow(
                    q,
                    [
                        (q.arrow_id(v, i), 1),
                        (q.arrow_id(vi, j), 1),
                        (q.arrow_id(v, j), -1),
                        (q.arrow_id(vj, i), -1),
                    ],
                )
                gens.append(f)
    return gens


def solve_flow(x, zeta, q):
    """An integral flow with the requested type vector and boundary.

    The compatibility condition is that the type vector and boundary
    agree in the acting group; otherwise no flow exists and a ValueError
    names the obstruction. On a single-factor quiver the construction is
    a running-sum chain along one invertible-weight type plus one closed
    correction sequence; product quivers fall back to a lattice solve.
    """
    if isinstance(zeta, ZetaVector):
        zvals = list(zeta.values)
    else:
        zvals = list(zeta)
        ZetaVector(zvals)
    x = list(x)
    if len(x) != q.n or len(zvals) != q.num_vertices:
        raise ValueError("dimension mismatch")
    if not all(isinstance(v, int) for v in x) or not all(
        isinstance(v, int) for v in zvals
    ):
        raise ValueError("integral data required")
    # obstruction: sum x_i w_i + sum_v v zeta(v) must vanish in the group
    for k, r in enumerate(q.orders):
        s = 0
        for i, (kk, w) in enumerate(q.type_data):
            if kk == k:
                s += x[i] * w
        for v, z in enumerate(zvals):
            s += q.vertex_tuple(v)[k] * z
        if s % r:
            raise ValueError(
                f"incompatible data: obstruction {s % r} mod {r} in factor {k}"
            )
    if not q.is_cyclic:
        rows = type_boundary_rows(q)
        sol = row_space_solve(rows, x + zvals)
        assert sol is not None, "obstruction check should certify solvability"
        return Flow(q, dict(enumerate(sol)))
    r = q.r
    weights = q.weights
    chain = next(
        (i for i, w in enumerate(weights, start=1) if _invertible(w, r)), None
    )
    if chain is None:
        raise ValueError("no weight invertible mod the order")
    c = weights[chain - 1]
    cinv = pow(c, -1, r)
    # running sums along the chain-type arrows relabelled by u = cinv * v
    f = Flow(q)
    items = []
    running = 0
    partial = []
    for u in range(r):
        running += zvals[(c * u) % r]
        partial.append(running)
    total_chain = 0
    for u in range(r):
        val = partial[u]
        if u == r - 1:
            assert val == 0, "zeta must sum to zero"
        tail = (c * (u + 1)) % r
        if val:
            items.append((q.arrow_id(tail, chain), val))
        total_chain += val
    f = Flow(q, items)
    # closed correction: fix the type vector with one sequential flow
    seq = []
    for i in range(1, q.n + 1):
        want = x[i - 1] - (total_chain if i == chain else 0)
        seq.extend([i if want > 0 else -i] * abs(want))
    corr = seq_to_flow(q, 0, seq)
    assert seq_endpoint(q, 0, seq) == 0, "correction sequence must close up"
    return f + corr


def _invertible(w, r):
    from math import gcd

    return gcd(w, r) == 1


def check_exactness(q):
    """Integer-linear-algebra audit of the flow lattices.

    Checks that the commutation flows span exactly the kernel of the
    combined type-and-boundary map, that types of boundaryless flows
    fill the weighted-sum-zero lattice, and that the map's image sits
    with index equal to the group order inside the target lattice.
    """
    n, m = q.n, q.num_vertices
    rows = type_boundary_rows(q)
    ker = left_kernel(rows)
    gens = [g.as_vector() for g in commutation_generators(q)]
    kernel_ok = lattices_equal(gens, ker, len(q.arrows))
    commutation_rank = rank_int(gens, len(q.arrows))

    ker_boundary = left_kernel(incidence_rows(q))
    pi_image = [
        [sum(krow[a.id] for a in q.arrows if a.type == i) for i in range(1, n + 1)]
        for krow in ker_boundary
    ]
    pi = lattice_pi(q)
    pi_ok = LatticeBasis(pi_image, n) == pi

    # image index inside types x (sum-zero vertex vectors)
    image_coords = [row[:n] + row[n + 1:] for row in rows]
    target_dim = n + m - 1
    if rank_int(image_coords, target_dim) == target_dim:
        sq = hnf_basis(image_coords, target_dim)
        cokernel_order = abs(det_bareiss(sq))
    else:
        cokernel_order = 0
    group_order = 1
    for r in q.orders:
        group_order *= r
    report = {
        "commutation_rank": commutation_rank,
        "kernel_matches_commutation": kernel_ok,
        "types_of_cycles_match_weight_lattice": pi_ok,
        "cokernel_order": cokernel_order,
        "group_order": group_order,
        "cokernel_ok": cokernel_order == group_order,
    }
    report["all_pass"] = bool(kernel_ok and pi_ok and report["cokernel_ok"])
    return report
