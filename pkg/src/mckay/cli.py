"""Command line surface: build quivers, solve for a weight vector, and
write the resulting geometry as JSON, DOT, or OFF.

Exit codes: 0 on success, 2 on invalid input, 3 when an internal
cross-check (fast path against oracle) disagrees.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import tempfile
from fractions import Fraction
from itertools import product

from .flows import ZetaVector, check_exactness
from .oracle import (
    check_closure,
    flow_polytope,
    project_and_hull,
    type_projection_rows,
    vertices_bruteforce,
)
from .polyhedra import as_fraction, convex_hull, face_lattice
from .quiver import Quiver, GroupAction
from .toric import (
    build_fan,
    classify_cone,
    crepancy_check,
    extreme_points,
    singularity_report,
    tangent_cone,
)
from .trees import (
    chamber_scan,
    closed_admissible_trees,
    enumerate_ic_trees,
    is_generic,
)


def parse_rational(tok):
    """An integer or a num/den pair, exactly."""
    tok = tok.strip()
    if "/" in tok:
        num, den = tok.split("/", 1)
        return Fraction(int(num), int(den))
    return int(tok)


def parse_action(text):
    """Factor list like 5:1,2,3 or 3:1,2;3:2,1 for products."""
    factors = []
    for part in text.split(";"):
        part = part.strip()
        if ":" not in part:
            raise ValueError(f"action factor {part!r} needs the form r:w1,w2,...")
        head, tail = part.split(":", 1)
        r = int(head)
        weights = tuple(int(w) for w in tail.split(","))
        factors.append((r, weights))
    return factors


def parse_zeta(text):
    """Weight vector from a comma list or from a file of entries."""
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            body = fh.read()
        if body.lstrip().startswith("["):
            return tuple(
                parse_rational(x) if isinstance(x, str) else x
                for x in json.loads(body)
            )
        toks = body.replace(",", " ").split()
        return tuple(parse_rational(t) for t in toks if not t.startswith("#"))
    return tuple(parse_rational(t) for t in text.split(","))


def _rat(x):
    f = as_fraction(x)
    if isinstance(f, int):
        return f
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)):
        return _rat(obj)
    return str(obj)


def dump_json(obj):
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".mckay-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(args, text):
    if getattr(args, "output", None):
        atomic_write(args.output, text)
    else:
        sys.stdout.write(text)


def _build(args):
    factors = parse_action(args.action)
    action = GroupAction(factors, allow_nonfree=args.allow_nonfree)
    return Quiver(action)


def _zeta_checked(q, args):
    zeta = ZetaVector(parse_zeta(args.zeta))
    if len(zeta) != q.num_vertices:
        raise ValueError(
            f"zeta has {len(zeta)} entries, the quiver has {q.num_vertices} vertices"
        )
    if not is_generic(zeta):
        print("warning: weights are not generic", file=sys.stderr)
    return zeta


def cmd_quiver(args):
    q = _build(args)
    if args.format == "dot":
        lines = ["digraph mckay {"]
        for a in q.arrows:
            lines.append(f'  {a.tail} -> {a.head} [label="{a.type}"];')
        lines.append("}")
        emit(args, "\n".join(lines) + "\n")
        return 0
    doc = {
        "action": [[r, list(w)] for r, w in q.action.factors],
        "types": q.n,
        "vertices": q.num_vertices,
        "arrows": [
            {"id": a.id, "tail": a.tail, "head": a.head, "type": a.type}
            for a in q.arrows
        ],
    }
    emit(args, dump_json(doc))
    return 0


def cmd_ic_trees(args):
    q = _build(args)
    trees = enumerate_ic_trees(q, reduce_by_symmetry=args.reduce)
    entries = []
    for T in trees:
        entry = {"arrows": list(T)}
        if args.singular_only:
            label = classify_cone(tangent_cone(q, T))
            if label.kind == "smooth":
                continue
            entry["kind"] = label.kind
        entries.append(entry)
    doc = {
        "action": [[r, list(w)] for r, w in q.action.factors],
        "reduced": bool(args.reduce),
        "singular_only": bool(args.singular_only),
        "count": len(entries),
        "trees": entries,
    }
    emit(args, dump_json(doc))
    return 0


def cmd_polytope(args):
    q = _build(args)
    zeta = _zeta_checked(q, args)
    eps = extreme_points(q, zeta)
    doc = {
        "action": [[r, list(w)] for r, w in q.action.factors],
        "zeta": list(zeta.values),
        "generic": is_generic(zeta),
        "euler": len(eps),
        "vertices": [
            {"point": list(ep.point), "tree": list(ep.tree), "closure": list(ep.closure)}
            for ep in eps
        ],
    }
    emit(args, dump_json(doc))
    return 0


def cmd_fan(args):
    q = _build(args)
    zeta = _zeta_checked(q, args)
    fan = build_fan(q, zeta)
    doc = {
        "action": [[r, list(w)] for r, w in q.action.factors],
        "zeta": list(zeta.values),
        "rays": [list(r) for r in fan.rays],
        "maximal": [list(c) for c in fan.maximal],
        "faces": [list(f) for f in fan.faces],
        "points": [list(p) for p in fan.points],
        "compatible": fan.compatible,
        "warnings": list(fan.warnings),
    }
    emit(args, dump_json(doc))
    return 0 if fan.compatible else 3


def cmd_classify(args):
    q = _build(args)
    zeta = _zeta_checked(q, args)
    rep = singularity_report(q, zeta)
    entries = []
    for e in rep.entries:
        item = {
            "point": list(e.point),
            "generators": e.generator_count,
            "smooth": e.smooth,
            "kind": e.label.kind,
        }
        if e.label.order:
            item["order"] = e.label.order
        if e.label.weights:
            item["weights"] = list(e.label.weights)
        if e.label.relations:
            item["relations"] = [list(r) for r in e.label.relations]
        entries.append(item)
    doc = {
        "action": [[r, list(w)] for r, w in q.action.factors],
        "zeta": list(zeta.values),
        "all_smooth": rep.all_smooth,
        "entries": entries,
    }
    emit(args, dump_json(doc))
    return 0


def cmd_crepancy(args):
    q = _build(args)
    zeta = _zeta_checked(q, args)
    fan = build_fan(q, zeta)
    rep = crepancy_check(fan)
    doc = {
        "action": [[r, list(w)] for r, w in q.action.factors],
        "zeta": list(zeta.values),
        "crepant": rep.crepant,
        "ray_sums": [{"ray": list(ray), "sum": s} for ray, s in rep.ray_sums],
        "warnings": list(fan.warnings),
    }
    emit(args, dump_json(doc))
    print(f"crepant: {'true' if rep.crepant else 'false'}", file=sys.stderr)
    return 0


def _sample_zetas(q, count, seed, spread):
    rng = random.Random(seed)
    r = q.num_vertices
    out = []
    while len(out) < count:
        vals = [rng.randint(-spread, spread) for _ in range(r - 1)]
        last = -sum(vals)
        if abs(last) > spread:
            continue
        vals.append(last)
        if any(vals):
            out.append(tuple(vals))
    return out


def cmd_chambers(args):
    q = _build(args)
    samples = _sample_zetas(q, args.samples, args.seed, args.spread)
    classify = None
    if args.classify:
        def classify(q2, tree):
            return classify_cone(tangent_cone(q2, tree)).kind
    rep = chamber_scan(q, samples, classify=classify)
    chambers = []
    for key, zetas, euler, summary in rep.chambers:
        item = {
            "euler": euler,
            "classes": [list(c) for c in key],
            "zetas": [list(z) for z in zetas],
        }
        if "classification" in summary:
            counts = {}
            for kind in summary["classification"]:
                counts[kind] = counts.get(kind, 0) + 1
            item["kinds"] = counts
        chambers.append(item)
    doc = {
        "action": [[r, list(w)] for r, w in q.action.factors],
        "samples": args.samples,
        "seed": args.seed,
        "spread": args.spread,
        "chambers": chambers,
        "warnings": list(rep.warnings),
    }
    emit(args, dump_json(doc))
    return 0


def _check_one(q, zeta, lines):
    zv = ZetaVector(zeta)
    p = flow_polytope(q, zv)
    vs = vertices_bruteforce(p)
    tree_pts = set()
    for T, fl in closed_admissible_trees(q, zv):
        vec = [Fraction(0)] * len(q.arrows)
        for a, val in fl.items():
            vec[a] = as_fraction(val)
        tree_pts.add(tuple(vec))
    if set(vs.vertices) != tree_pts:
        raise ArithmeticError(f"flow vertex sets disagree at zeta={tuple(zv.values)}")
    lines.append(f"zeta {tuple(zv.values)}: {len(vs.vertices)} flow vertices, tree flows agree")
    ph = project_and_hull(vs.vertices, vs.rays, type_projection_rows(q))
    fast = sorted(
        tuple(as_fraction(x) for x in ep.point) for ep in extreme_points(q, zv)
    )
    if list(ph.hull.vertices) != fast:
        raise ArithmeticError(f"projected vertex sets disagree at zeta={tuple(zv.values)}")
    lines.append(
        f"zeta {tuple(zv.values)}: {len(fast)} projected vertices, hull agrees"
    )
    fan = build_fan(q, zv)
    if not fan.compatible:
        raise ArithmeticError(f"fan cones do not meet in faces at zeta={tuple(zv.values)}")
    lines.append(f"zeta {tuple(zv.values)}: fan with {len(fan.rays)} rays is compatible")


def cmd_check(args):
    q = _build(args)
    lines = []
    if args.exactness:
        rep = check_exactness(q)
        for k in sorted(rep):
            lines.append(f"exactness {k}: {rep[k]}")
        if not rep["all_pass"]:
            raise ArithmeticError("exactness audit failed")
    if args.zeta:
        _check_one(q, parse_zeta(args.zeta), lines)
    if args.all_zeta:
        lo, hi = args.all_zeta.split("..")
        lo, hi = int(lo), int(hi)
        r = q.num_vertices
        if (hi - lo + 1) ** (r - 1) > 20000:
            raise ValueError("exhaustive sweep too large; use --zeta samples")
        count = 0
        for head in product(range(lo, hi + 1), repeat=r - 1):
            last = -sum(head)
            if not lo <= last <= hi:
                continue
            _check_one(q, head + (last,), lines)
            count += 1
        lines.append(f"swept {count} weight vectors exhaustively")
    if args.closures:
        rng = random.Random(args.seed)
        m = len(q.arrows)
        for _ in range(args.closures):
            S = frozenset(a for a in range(m) if rng.random() < 0.5)
            if not check_closure(q, S):
                raise ArithmeticError(f"closure engines disagree on {sorted(S)}")
        lines.append(f"{args.closures} random closures agree")
    if not lines:
        raise ValueError("nothing to check: pass --zeta, --all-zeta, --closures or --exactness")
    emit(args, "\n".join(lines) + "\n")
    return 0


def _off_text(points, faces):
    """OFF mesh of the bounded 2-faces; coordinates as decimals."""
    lines = ["OFF", f"{len(points)} {len(faces)} 0"]
    for p in points:
        lines.append(" ".join(repr(float(as_fraction(x))) for x in p))
    for f in faces:
        lines.append(str(len(f)) + " " + " ".join(str(i) for i in f))
    return "\n".join(lines) + "\n"


def _ring_order(points, idxs):
    """Vertex indices of a planar polygon in boundary order."""
    pts = [tuple(float(as_fraction(x)) for x in points[i]) for i in idxs]
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    cz = sum(p[2] for p in pts) / len(pts)
    u = tuple(a - b for a, b in zip(pts[0], (cx, cy, cz)))
    best = None
    for p in pts[1:]:
        w = tuple(a - b for a, b in zip(p, (cx, cy, cz)))
        nx = u[1] * w[2] - u[2] * w[1]
        ny = u[2] * w[0] - u[0] * w[2]
        nz = u[0] * w[1] - u[1] * w[0]
        norm = nx * nx + ny * ny + nz * nz
        if best is None or norm > best[0]:
            best = (norm, (nx, ny, nz))
    nx, ny, nz = best[1]
    vx = ny * u[2] - nz * u[1], nz * u[0] - nx * u[2], nx * u[1] - ny * u[0]

    def angle(i):
        p = tuple(float(as_fraction(x)) for x in points[i])
        w = (p[0] - cx, p[1] - cy, p[2] - cz)
        a = sum(a * b for a, b in zip(w, u))
        b = sum(a * b for a, b in zip(w, vx))
        return math.atan2(b, a)

    return sorted(idxs, key=angle)


def cmd_export(args):
    q = _build(args)
    if q.n != 3:
        raise ValueError("OFF export needs exactly three types; use the JSON commands")
    zeta = _zeta_checked(q, args)
    eps = extreme_points(q, zeta)
    points = [ep.point for ep in eps]
    axes = [tuple(1 if j == i else 0 for j in range(3)) for i in range(3)]
    hull = convex_hull(3, points, rays=axes)
    order = {p: i for i, p in enumerate(points)}
    faces = []
    for face in face_lattice(hull):
        if face.dim == 2 and not face.rays:
            idxs = [order[hull.vertices[i]] for i in sorted(face.vertices)]
            faces.append(tuple(_ring_order(points, idxs)))
    faces.sort()
    atomic_write(args.output, _off_text(points, faces))
    sidecar = {
        "action": [[r, list(w)] for r, w in q.action.factors],
        "zeta": list(zeta.values),
        "vertices": [list(p) for p in points],
        "bounded_faces": [list(f) for f in faces],
    }
    atomic_write(args.output + ".json", dump_json(sidecar))
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="mckay",
        description="Transportation polytopes and toric fans of McKay quivers.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, zeta=False, output=True):
        p.add_argument("--action", required=True, help="factor list, e.g. 5:1,2,3")
        p.add_argument("--allow-nonfree", action="store_true",
                       help="accept weights sharing a factor with the order")
        if zeta:
            p.add_argument("--zeta", required=True,
                           help="comma list or file; entries integer or num/den")
        if output:
            p.add_argument("--output", help="write here instead of stdout")

    p = sub.add_parser("quiver", help="arrows of the quiver")
    common(p)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_quiver)

    p = sub.add_parser("ic-trees", help="spanning trees with rank-zero closure")
    common(p)
    p.add_argument("--reduce", action="store_true",
                   help="one representative per vertex-translation orbit")
    p.add_argument("--singular-only", action="store_true",
                   help="keep only trees with a non-smooth cone")
    p.set_defaults(func=cmd_ic_trees)

    p = sub.add_parser("polytope", help="extreme points for a weight vector")
    common(p, zeta=True)
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("fan", help="dual fan of the vertex cones")
    common(p, zeta=True)
    p.set_defaults(func=cmd_fan)

    p = sub.add_parser("classify", help="singularity type at every vertex")
    common(p, zeta=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("crepancy", help="ray-sum crepancy verdict")
    common(p, zeta=True)
    p.set_defaults(func=cmd_crepancy)

    p = sub.add_parser("chambers", help="group sampled weights by extreme classes")
    common(p)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spread", type=int, default=9, help="entries drawn from [-spread, spread]")
    p.add_argument("--classify", action="store_true")
    p.set_defaults(func=cmd_chambers)

    p = sub.add_parser("check", help="run the slow oracles against the fast paths")
    common(p)
    p.add_argument("--zeta")
    p.add_argument("--all-zeta", help="range like -3..3 for an exhaustive sweep")
    p.add_argument("--closures", type=int, default=0,
                   help="random closure comparisons to run")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exactness", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("export", help="OFF mesh of the bounded boundary (3 types)")
    common(p, zeta=True, output=False)
    p.add_argument("--output", required=True, help="OFF path; JSON sidecar beside it")
    p.set_defaults(func=cmd_export)

    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    # let --zeta -1,-1,... through: argparse reads the value as a flag
    i = 0
    while i < len(argv) - 1:
        if argv[i] in ("--zeta", "--all-zeta") and argv[i + 1].startswith("-"):
            argv[i : i + 2] = [f"{argv[i]}={argv[i + 1]}"]
        i += 1
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ArithmeticError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
