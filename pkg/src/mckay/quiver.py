"""McKay quivers of abelian quotient actions.

A cyclic action 1/r(w_1,...,w_n) yields the quiver with vertex set Z_r and
one arrow of type i from v to v - w_i for every vertex v and every i.
General abelian actions are products of cyclic factors; the product quiver
replicates each factor's arrows over the other factors' vertices, with
types numbered globally (factor 1 first).
"""

from __future__ import annotations

from math import gcd
from typing import NamedTuple


class Arrow(NamedTuple):
    id: int
    tail: int
    head: int
    type: int


class GroupAction:
    """Finite abelian group acting diagonally: a list of cyclic factors.

    Each factor is (r, weights) with weights reduced mod r. Factors of
    order >= 2 must have every weight invertible mod r (the action is then
    free away from the origin); pass allow_nonfree=True to lift that for
    quiver-level work where freeness is irrelevant. Weights congruent to
    0 are always rejected for r >= 2: they would create loop arrows.
    A factor of order 1 is the trivial group; it contributes no arrows.
    """

    __slots__ = ("factors", "free")

    def __init__(self, factors, allow_nonfree=False):
        factors = list(factors)
        if not factors:
            raise ValueError("empty factor list")
        norm = []
        free = True
        for r, weights in factors:
            r = int(r)
            if r < 1:
                raise ValueError(f"group order must be positive, got {r}")
            ws = [int(w) % r for w in weights]
            if r >= 2:
                if len(ws) < 2:
                    raise ValueError(
                        f"need at least two weights for order {r}, got {len(ws)}"
                    )
                for w in ws:
                    if w == 0:
                        raise ValueError(f"weight 0 mod {r} would create loops")
                    if gcd(w, r) != 1:
                        free = False
                        if not allow_nonfree:
                            raise ValueError(
                                f"weight {w} shares a factor with {r}: "
                                "action is not free away from the origin"
                            )
            norm.append((r, tuple(ws)))
        self.factors = tuple(norm)
        self.free = free

    @classmethod
    def cyclic(cls, r, weights, allow_nonfree=False):
        return cls([(r, weights)], allow_nonfree=allow_nonfree)

    @property
    def weight_count(self):
        """Total number of listed weights, trivial factors included."""
        return sum(len(ws) for _, ws in self.factors)

    def congruences(self):
        """Per-factor (modulus, weight slice) pairs over the full weight list."""
        out = []
        pos = 0
        for r, ws in self.factors:
            out.append((r, list(range(pos, pos + len(ws))), list(ws)))
            pos += len(ws)
        return out

    def __repr__(self):
        parts = ",".join(f"1/{r}({','.join(map(str, ws))})" for r, ws in self.factors)
        return f"GroupAction({parts})"


class Quiver:
    """Immutable typed multigraph on a finite abelian group of vertices.

    Vertices are encoded as integers 0..num_vertices-1 (mixed radix over
    the nontrivial factors). Arrow ids are v * n + (i - 1) for the type-i
    arrow out of vertex v, so ids are reproducible across runs.
    """

    __slots__ = (
        "action",
        "orders",
        "type_data",
        "type_shifts",
        "n",
        "num_vertices",
        "arrows",
        "_out",
        "_in",
    )

    def __init__(self, action):
        self.action = action
        # nontrivial factors carry the vertices and arrows
        live = [(r, ws) for r, ws in action.factors if r >= 2]
        self.orders = tuple(r for r, _ in live)
        num = 1
        for r in self.orders:
            num *= r
        self.num_vertices = num
        # global type -> (factor position among live factors, weight)
        type_data = []
        for k, (r, ws) in enumerate(live):
            for w in ws:
                type_data.append((k, w))
        self.type_data = tuple(type_data)
        self.n = len(type_data)
        # encoded group element subtracted by a type-i arrow: head = tail - shift
        shifts = []
        for k, w in type_data:
            tup = [0] * len(self.orders)
            tup[k] = w
            shifts.append(self.vertex_encode(tup))
        self.type_shifts = tuple(shifts)
        arrows = []
        for v in range(num):
            tup = self.vertex_tuple(v)
            for i, (k, w) in enumerate(type_data, start=1):
                head = list(tup)
                head[k] = (head[k] - w) % self.orders[k]
                arrows.append(
                    Arrow(len(arrows), v, self.vertex_encode(head), i)
                )
        self.arrows = tuple(arrows)
        out = [[] for _ in range(num)]
        inc = [[] for _ in range(num)]
        for a in arrows:
            out[a.tail].append(a)
            inc[a.head].append(a)
        self._out = tuple(tuple(x) for x in out)
        self._in = tuple(tuple(x) for x in inc)

    # -- group structure ------------------------------------------------

    def vertex_tuple(self, v):
        if not self.orders:
            return ()
        parts = []
        for r in reversed(self.orders):
            parts.append(v % r)
            v //= r
        return tuple(reversed(parts))

    def vertex_encode(self, tup):
        v = 0
        for r, c in zip(self.orders, tup):
            v = v * r + (c % r)
        return v

    def vertex_add(self, u, v):
        a, b = self.vertex_tuple(u), self.vertex_tuple(v)
        return self.vertex_encode([x + y for x, y in zip(a, b)])

    def vertex_neg(self, v):
        return self.vertex_encode([-x for x in self.vertex_tuple(v)])

    def vertex_sub(self, u, v):
        a, b = self.vertex_tuple(u), self.vertex_tuple(v)
        return self.vertex_encode([x - y for x, y in zip(a, b)])

    def live_action(self):
        """The action with trivial factors dropped: what the arrows see."""
        live = [(r, ws) for r, ws in self.action.factors if r >= 2]
        return GroupAction(live, allow_nonfree=True)

    # -- arrows ----------------------------------------------------------

    def arrow_id(self, v, i):
        """Id of the type-i arrow out of vertex v."""
        return v * self.n + (i - 1)

    def out_arrows(self, v):
        return self._out[v]

    def in_arrows(self, v):
        return self._in[v]

    def type_of_arrow(self, arrow_id):
        return arrow_id % self.n + 1

    def translate_arrow(self, arrow_id, g):
        """Image of an arrow under vertex translation by group element g."""
        v, i = divmod(arrow_id, self.n)
        return self.vertex_add(v, g) * self.n + i

    # -- conveniences ----------------------------------------------------

    @property
    def is_cyclic(self):
        return len(self.orders) == 1

    @property
    def r(self):
        if not self.is_cyclic:
            raise ValueError("not a single-factor quiver")
        return self.orders[0]

    @property
    def weights(self):
        live = [(r, ws) for r, ws in self.action.factors if r >= 2]
        if len(live) != 1:
            raise ValueError("not a single-factor quiver")
        return list(live[0][1])

    def __repr__(self):
        return f"Quiver({self.action!r}: {self.num_vertices} vertices, {len(self.arrows)} arrows)"

    def to_json_dict(self):
        d = {}
        if self.is_cyclic:
            d["r"] = self.r
            d["weights"] = self.weights
        else:
            d["factors"] = [
                {"r": r, "weights": list(ws)} for r, ws in self.action.factors
            ]
        d["vertices"] = list(range(self.num_vertices))
        d["arrows"] = [
            {"id": a.id, "tail": a.tail, "head": a.head, "type": a.type}
            for a in self.arrows
        ]
        return d


def build_mckay_cyclic(r, weights, allow_nonfree=False):
    """The McKay quiver of the cyclic action 1/r(w_1,...,w_n)."""
    return Quiver(GroupAction.cyclic(r, weights, allow_nonfree=allow_nonfree))


def build_mckay_abelian(action, allow_nonfree=False):
    """The McKay quiver of a product of cyclic actions."""
    if not isinstance(action, GroupAction):
        action = GroupAction(action, allow_nonfree=allow_nonfree)
    return Quiver(action)


def underlying_connected(q):
    """Is the underlying undirected multigraph connected?"""
    if q.num_vertices == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for a in q.out_arrows(v):
            if a.head not in seen:
                seen.add(a.head)
                stack.append(a.head)
        for a in q.in_arrows(v):
            if a.tail not in seen:
                seen.add(a.tail)
                stack.append(a.tail)
    return len(seen) == q.num_vertices


class Path:
    """Walk in the underlying graph: steps (arrow_id, sign), sign=+1 along
    the arrow's direction. Consecutive steps may never use the same arrow.
    """

    __slots__ = ("quiver", "steps", "tail", "head")

    def __init__(self, quiver, steps, base=None):
        steps = tuple((int(a), int(s)) for a, s in steps)
        if not steps:
            if base is None:
                raise ValueError("empty path needs a base vertex")
            self.tail = self.head = base
            self.quiver = quiver
            self.steps = steps
            return
        cur = None
        for (a, s), prev in zip(steps, (None,) + steps[:-1]):
            if s not in (1, -1):
                raise ValueError(f"bad sign {s}")
            arr = quiver.arrows[a]
            start, end = (arr.tail, arr.head) if s == 1 else (arr.head, arr.tail)
            if cur is None:
                self.tail = start
            elif cur != start:
                raise ValueError("steps do not chain")
            if prev is not None and prev[0] == a:
                raise ValueError("consecutive steps repeat an arrow")
            cur = end
        self.head = cur
        self.quiver = quiver
        self.steps = steps

    def is_cycle(self):
        return self.tail == self.head

    def positive_part(self):
        return {a for a, s in self.steps if s == 1}

    def negative_part(self):
        return {a for a, s in self.steps if s == -1}

    def reversed(self):
        return Path(
            self.quiver,
            [(a, -s) for a, s in reversed(self.steps)],
            base=self.head,
        )

    def __repr__(self):
        return f"Path({self.tail}->{self.head}, {list(self.steps)})"


def cycle_canonical(steps):
    """Canonical representative of a cycle: the lexicographically smallest
    among all rotations of the step tuple and of its reversal."""
    steps = tuple(steps)
    if not steps:
        return steps
    rev = tuple((a, -s) for a, s in reversed(steps))
    best = None
    for seq in (steps, rev):
        for i in range(len(seq)):
            rot = seq[i:] + seq[:i]
            if best is None or rot < best:
                best = rot
    return best


def enumerate_cycles(q, max_len):
    """All arrow-simple cycles of length <= max_len, canonicalized.

    A cycle here is a closed walk that uses no arrow twice; it may
    revisit vertices. Each cycle appears once, in canonical form,
    and the list is sorted.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    adj = [[] for _ in range(q.num_vertices)]
    for a in q.arrows:
        adj[a.tail].append((a.head, a.id, 1))
        if a.head != a.tail:
            adj[a.head].append((a.tail, a.id, -1))
    found = set()
    steps = []
    used = set()

    def dfs(start, v):
        if steps and v == start:
            found.add(cycle_canonical(steps))
        if len(steps) == max_len:
            return
        for w, aid, sign in adj[v]:
            # only explore arrows >= the first step's arrow: every cycle is
            # discovered from its smallest arrow id, which prunes symmetric
            # restarts without losing any canonical class
            if aid in used or (steps and aid < steps[0][0]):
                continue
            steps.append((aid, sign))
            used.add(aid)
            dfs(start, w)
            steps.pop()
            used.remove(aid)

    for a in q.arrows:
        # start each walk at its smallest arrow, traversed forward: the
        # canonical form quotients by rotation and reflection, so this
        # orientation always finds a representative of the class
        steps.append((a.id, 1))
        used.add(a.id)
        dfs(a.tail, a.head)
        steps.pop()
        used.remove(a.id)
    return sorted(found)
