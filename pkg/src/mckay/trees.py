"""Spanning trees, their flows and cones, and IC-tree catalogs.

A tree pins down the whole transportation solution: peeling leaves
recovers the unique flow with a prescribed boundary, and each arrow's
value is a cut sum of boundary weights, which makes the admissible
region in weight space an explicit polyhedral cone. Catalog routines
enumerate spanning trees outright at small scale and walk the skeleton
of the flow polytope by simplex pivots when only the admissible ones
are wanted.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .closure import cycle_closure, is_ic
from .flows import Flow, ZetaVector
from .intlinalg import det_bareiss
from .quiver import underlying_connected
from .simplex import OPTIMAL, solve_lp


def tree_adjacency(q, T):
    """Undirected adjacency of a spanning tree, or None if T is not one."""
    T = set(T)
    if len(T) != q.num_vertices - 1:
        return None
    adj = {v: [] for v in range(q.num_vertices)}
    parent = list(range(q.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in T:
        a = q.arrows[b]
        ra, rb = find(a.tail), find(a.head)
        if ra == rb:
            return None
        parent[ra] = rb
        adj[a.tail].append((a.head, b))
        adj[a.head].append((a.tail, b))
    return adj


def spanning_tree_count(q):
    """Number of spanning trees of the underlying multigraph."""
    r = q.num_vertices
    lap = [[0] * r for _ in range(r)]
    for a in q.arrows:
        lap[a.tail][a.tail] += 1
        lap[a.head][a.head] += 1
        lap[a.tail][a.head] -= 1
        lap[a.head][a.tail] -= 1
    reduced = [row[1:] for row in lap[1:]]
    return abs(det_bareiss(reduced)) if reduced else 1


def enumerate_spanning_trees(q):
    """All spanning trees as sorted arrow-id tuples, in canonical order.

    Exhaustive backtracking with a connectivity prune; asserts the total
    against the determinant count at the end."""
    if not underlying_connected(q):
        raise ValueError("quiver is not connected")
    m = len(q.arrows)
    r = q.num_vertices
    if r == 1:
        yield ()
        return
    edges = [(a.tail, a.head) for a in q.arrows]
    found = 0

    def connectable(excluded):
        parent = list(range(r))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comp = r
        for i, (u, v) in enumerate(edges):
            if i in excluded:
                continue
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                comp -= 1
        return comp == 1

    stack = []
    excluded = set()

    def rec(i, parent, count):
        nonlocal found
        if count == r - 1:
            found += 1
            yield tuple(stack)
            return
        if i == m or m - i < r - 1 - count:
            return
        u, v = edges[i]

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ru, rv = find(u), find(v)
        if ru != rv:
            child = parent.copy()
            child[ru] = rv
            stack.append(i)
            yield from rec(i + 1, child, count + 1)
            stack.pop()
        excluded.add(i)
        if connectable(excluded):
            yield from rec(i + 1, parent, count)
        excluded.discard(i)

    yield from rec(0, list(range(r)), 0)
    want = spanning_tree_count(q)
    assert found == want, f"tree enumeration found {found}, determinant says {want}"


def tree_flow(q, T, zeta):
    """The unique flow supported inside the tree whose boundary is zeta."""
    if not isinstance(zeta, ZetaVector):
        zeta = ZetaVector(zeta)
    adj = tree_adjacency(q, T)
    if adj is None:
        raise ValueError("not a spanning tree of the quiver")
    need = list(zeta.values)
    degree = {v: len(adj[v]) for v in adj}
    used = set()
    leaves = [v for v, d in degree.items() if d == 1]
    vals = {}
    while leaves:
        v = leaves.pop()
        nxt = next(((u, b) for u, b in adj[v] if b not in used), None)
        if nxt is None:
            continue
        u, b = nxt
        a = q.arrows[b]
        vals[b] = need[v] if a.head == v else -need[v]
        used.add(b)
        need[u] += need[v]
        need[v] = 0
        degree[u] -= 1
        degree[v] -= 1
        if degree[u] == 1:
            leaves.append(u)
    return Flow(q, vals)


def _cut_side(q, adj, arrow_id):
    """Vertices on the head side of the tree once arrow_id is removed."""
    a = q.arrows[arrow_id]
    side = {a.head}
    stack = [a.head]
    while stack:
        v = stack.pop()
        for u, b in adj[v]:
            if b != arrow_id and u not in side:
                side.add(u)
                stack.append(u)
    return side


class AdmissibleCone(NamedTuple):
    tree: tuple
    forms: tuple   # per tree arrow: coefficient tuple over vertices


def admissible_cone(q, T):
    """Per-arrow linear forms in the boundary weights; the tree carries a
    non-negative flow exactly when all forms are non-negative."""
    adj = tree_adjacency(q, T)
    if adj is None:
        raise ValueError("not a spanning tree of the quiver")
    r = q.num_vertices
    tree = tuple(sorted(T))
    forms = []
    for b in tree:
        head_side = _cut_side(q, adj, b)
        pos = tuple(1 if v in head_side else 0 for v in range(r))
        neg = tuple(0 if v in head_side else -1 for v in range(r))
        # both say the same on zero-sum weights; keep the shorter words
        np, nn = len(head_side), r - len(head_side)
        if np < nn or (np == nn and pos < neg):
            forms.append(pos)
        else:
            forms.append(neg)
    return AdmissibleCone(tree, tuple(forms))


def translate_tree(q, T, g):
    """Image of a tree under adding group element g to every vertex."""
    out = []
    for b in T:
        a = q.arrows[b]
        out.append(q.arrow_id(q.vertex_add(a.tail, g), a.type))
    return tuple(sorted(out))


def canonical_translate(q, T):
    return min(translate_tree(q, T, g) for g in range(q.num_vertices))


def enumerate_ic_trees(q, reduce_by_symmetry=False):
    """Spanning trees with rank-zero closure, canonically sorted; with
    reduction, one representative per vertex-translation orbit."""
    out = []
    seen = set()
    for T in enumerate_spanning_trees(q):
        tree = tuple(sorted(T))
        if reduce_by_symmetry:
            rep = canonical_translate(q, tree)
            if rep in seen:
                continue
            seen.add(rep)
            if is_ic(q, frozenset(rep)):
                out.append(rep)
        elif is_ic(q, frozenset(tree)):
            out.append(tree)
    return sorted(out)


def is_generic(zeta):
    """No nonempty proper subset of the weights sums to zero."""
    if not isinstance(zeta, ZetaVector):
        zeta = ZetaVector(zeta)
    vals = list(zeta.values)
    r = len(vals)
    sums = {0: 0}
    # meet in the middle is overkill at desk scale; direct subset scan
    for bits in range(1, 2 ** r - 1):
        total = 0
        b = bits
        i = 0
        while b:
            if b & 1:
                total += vals[i]
            b >>= 1
            i += 1
        if total == 0:
            return False
    return True


def _initial_tree(q, zeta):
    """Some vertex of the flow polytope, as (tree tuple, flow dict)."""
    m = len(q.arrows)
    eq = []
    for v in range(q.num_vertices):
        row = [0] * m
        for a in q.arrows:
            if a.head == v:
                row[a.id] += 1
            if a.tail == v:
                row[a.id] -= 1
        eq.append((row, zeta[v]))
    res = solve_lp(m, None, eq=eq)
    if res.status != OPTIMAL:
        return None
    support = tuple(sorted(i for i, x in enumerate(res.x) if x != 0))
    return support, {i: res.x[i] for i in support}


def _tree_path(q, adj, start, goal):
    """Tree walk from start to goal as (arrow id, +1 forward) steps."""
    prev = {start: None}
    stack = [start]
    while stack:
        v = stack.pop()
        if v == goal:
            break
        for u, b in adj[v]:
            if u not in prev:
                prev[u] = (v, b)
                stack.append(u)
    steps = []
    v = goal
    while prev[v] is not None:
        u, b = prev[v]
        a = q.arrows[b]
        steps.append((b, 1 if a.head == v else -1))
        v = u
    steps.reverse()
    return steps


def admissible_trees(q, zeta):
    """All spanning trees carrying a strictly positive flow with boundary
    zeta, found by walking the edge graph of the flow polytope.

    Needs generic zeta: every polytope vertex is then a nondegenerate
    tree flow and the pivot walk visits each tree exactly once."""
    if not isinstance(zeta, ZetaVector):
        zeta = ZetaVector(zeta)
    if not is_generic(zeta):
        raise ValueError("pivot enumeration needs generic weights")
    first = _initial_tree(q, zeta)
    if first is None:
        return []
    tree0, flow0 = first
    assert len(tree0) == q.num_vertices - 1, "degenerate start despite genericity"
    seen = {tree0: flow0}
    frontier = [tree0]
    while frontier:
        tree = frontier.pop()
        flow = seen[tree]
        adj = tree_adjacency(q, tree)
        in_tree = set(tree)
        for e in range(len(q.arrows)):
            if e in in_tree:
                continue
            a = q.arrows[e]
            cycle = [(e, 1)] + _tree_path(q, adj, a.head, a.tail)
            drops = [(flow[b], b) for b, s in cycle if s < 0]
            if not drops:
                continue   # all-forward cycle: recession direction
            t, leave = min(drops)
            assert sum(1 for d, _ in drops if d == t) == 1, "tie needs generic zeta"
            nxt = dict(flow)
            nxt[e] = 0
            for b, s in cycle:
                nxt[b] += t if s > 0 else -t
            del nxt[leave]
            new_tree = tuple(sorted(nxt))
            if new_tree not in seen:
                assert len(new_tree) == q.num_vertices - 1
                seen[new_tree] = nxt
                frontier.append(new_tree)
    return sorted((t, seen[t]) for t in seen)


def closed_admissible_trees(q, zeta):
    """Trees carrying a non-negative flow for zeta, with those flows.

    Generic zeta: the pivot walk, whose flows are strictly positive.
    Otherwise every spanning tree is checked, which only scales to
    small quivers."""
    if not isinstance(zeta, ZetaVector):
        zeta = ZetaVector(zeta)
    if is_generic(zeta):
        return admissible_trees(q, zeta)
    if q.num_vertices > 8:
        raise ValueError("degenerate weights need exhaustive trees; too large")
    pairs = []
    for T in enumerate_spanning_trees(q):
        f = tree_flow(q, T, zeta)
        if all(f[b] >= 0 for b in T):
            pairs.append((tuple(sorted(T)), {b: f[b] for b in T}))
    pairs.sort()
    return pairs


def admissible_ic_trees(q, zeta):
    """IC-trees admissible for zeta, paired with their flows."""
    if not isinstance(zeta, ZetaVector):
        zeta = ZetaVector(zeta)
    pairs = closed_admissible_trees(q, zeta)
    out = []
    for tree, flow in pairs:
        if is_ic(q, frozenset(tree)):
            out.append((tree, Flow(q, flow)))
    return out


class ChamberReport(NamedTuple):
    chambers: tuple     # (class key, samples, euler, summary dict)
    warnings: tuple


def chamber_scan(q, samples, classify=None):
    """Group weight samples by their set of extreme configurations."""
    groups = {}
    warnings = []
    for zeta in samples:
        zv = zeta if isinstance(zeta, ZetaVector) else ZetaVector(zeta)
        if not is_generic(zv):
            warnings.append(f"weights {tuple(zv.values)} are not generic")
            continue
        classes = {}
        for tree, flow in admissible_ic_trees(q, zv):
            key = tuple(sorted(cycle_closure(q, frozenset(tree))))
            classes.setdefault(key, (tree, flow))
        key = tuple(sorted(classes))
        groups.setdefault(key, []).append((tuple(zv.values), classes))
    chambers = []
    for key in sorted(groups):
        entries = groups[key]
        zetas = tuple(z for z, _ in entries)
        euler = len(key)
        summary = {}
        if classify is not None:
            tags = []
            for tree, _ in entries[0][1].values():
                tags.append(classify(q, frozenset(tree)))
            summary["classification"] = tuple(sorted(tags))
        chambers.append((key, zetas, euler, summary))
    return ChamberReport(tuple(chambers), tuple(warnings))
