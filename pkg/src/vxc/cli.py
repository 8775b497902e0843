"""Command-line entry point.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or input
errors.  JSON goes to stdout unless ``-o`` names a file.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import __version__
from . import exact as ex
from . import io
from .enumeration import closest_vectors, closest_vectors_ambient
from .gadgets import (SlackHypothesisError, build_gadget, correlation_instance, perturbed_h,
                      raw_gadget, slack_embedding, stable_set_instance, verify_gadget)
from .lattice import Lattice, congruence_lattice, dual_lattice, make_lattice, parse_family, \
    product_lattice
from .lifts import (Lift, corrupt_projection, lift_astar_zonotope, lift_congruence_cell, lift_face, lift_root_cell,
                    lift_union, verify_lift)
from .polytope import (Polytope, convex_hull, dualize, slack_matrix, slack_rank_bounds)
from .voronoi import (RankLimitError, cell_membership, dual_voronoi_cell,
                      dual_voronoi_cell_ambient, polar_face, relevant_vectors, voronoi_cell,
                      voronoi_cell_ambient)

OK, FAILED, USAGE = 0, 1, 2
FAMILY_ALIASES = {"A": "A", "D": "D", "Astar": "Astar", "Dstar": "Dstar_scaled",
                  "Dstar_scaled": "Dstar_scaled"}


class UsageError(Exception):
    pass


# --- helpers ------------------------------------------------------------------------

def _emit(data, out: str | None):
    text = io.dumps(data)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str, kind: type):
    obj = io.load(path)
    if not isinstance(obj, kind):
        raise UsageError(f"{path}: expected a {kind.__name__.lower()}")
    return obj


def _lattice_arg(arg: str) -> Lattice:
    """A lattice JSON file or a family shorthand such as A3 or cong:d=4,a=2."""
    if Path(arg).is_file():
        return _load(arg, Lattice)
    try:
        return parse_family(arg)
    except ValueError as err:
        raise UsageError(f"{arg!r} is neither a file nor a lattice shorthand") from err


def _q(v):
    return [ex.fmt(x) for x in v]


def _qm(rows):
    return [_q(r) for r in rows]


def _lattice_views(L: Lattice, vectors) -> dict:
    out = {"coefficients": [list(v) for v in vectors]}
    if L.basis is not None:
        out["ambient"] = _qm(L.embed(v) for v in vectors)
    return out


# --- lattice / cvp ------------------------------------------------------------------

def cmd_lattice_build(a):
    if a.basis:
        weights = io.parse_vector(a.weights) if a.weights else None
        L = make_lattice(io.parse_matrix(a.basis), label=a.label or "", weights=weights)
    elif a.name:
        L = _lattice_arg(a.name)
    else:
        raise UsageError("give a shorthand or --basis")
    _emit(L, a.output)
    return OK


def cmd_lattice_dual(a):
    _emit(dual_lattice(_lattice_arg(a.lattice)), a.output)
    return OK


def cmd_lattice_product(a):
    _emit(product_lattice(_lattice_arg(a.first), _lattice_arg(a.second)), a.output)
    return OK


def cmd_cvp(a):
    L = _lattice_arg(a.lattice)
    x = io.parse_vector(a.point)
    if a.ambient:
        if L.basis is None or len(x) != L.ambient_dim:
            raise UsageError("ambient point does not match the embedding")
        d2, cl = closest_vectors_ambient(L, x)
    else:
        if len(x) != L.rank:
            raise UsageError(f"point has {len(x)} coordinates, rank is {L.rank}")
        d2, cl = closest_vectors(L, x)
    _emit({"type": "cvp", "dist2": ex.fmt(d2), "closest": _lattice_views(L, cl)}, a.output)
    return OK


# --- voronoi ------------------------------------------------------------------------

def cmd_relevant(a):
    L = _lattice_arg(a.lattice)
    rv = relevant_vectors(L, jobs=a.jobs)
    data = {"type": "relevant_vectors", "lattice": L.label, "count": len(rv),
            "norms": _q(rv.norms), **_lattice_views(L, rv.vectors)}
    _emit(data, a.output)
    return OK


def cmd_cell(a):
    L = _lattice_arg(a.lattice)
    rv = relevant_vectors(L, jobs=a.jobs)
    P = dual_voronoi_cell(L, rv) if a.dual else voronoi_cell(L, rv)
    if a.vertices:
        P.V  # force vertex enumeration
    if a.dual:
        P.H  # force facet enumeration
    data = {"type": "voronoi_cell", "lattice": L.label, "dual": a.dual,
            "coordinates": "dual basis" if a.dual else "coefficients",
            "polytope": io.to_json(P)}
    if L.basis is not None:
        amb = dual_voronoi_cell_ambient(L, rv) if a.dual else voronoi_cell_ambient(L, rv)
        if a.vertices:
            amb.V  # force vertex enumeration
        data["ambient"] = io.to_json(amb)
    _emit(data, a.output)
    return OK


def cmd_polar_face(a):
    L = _lattice_arg(a.lattice)
    p = io.parse_vector(a.point)
    if len(p) != L.rank:
        raise UsageError(f"point has {len(p)} coordinates, rank is {L.rank}")
    try:
        F = polar_face(L, p)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return FAILED
    data = {"type": "polar_face", "dist2": ex.fmt(F.dist2), "functional": _q(F.point),
            "closest": _lattice_views(L, F.closest), "vertices": _qm(F.polytope.V)}
    if L.basis is not None:
        data["ambient_vertices"] = _qm(L.embed_dual(y) for y in F.polytope.V)
    _emit(data, a.output)
    return OK


# --- polytope -----------------------------------------------------------------------

def cmd_poly_dualize(a):
    _emit(dualize(_load(a.polytope, Polytope)), a.output)
    return OK


def cmd_poly_vertices(a):
    P = _load(a.polytope, Polytope)
    _emit({"type": "vertices", "count": len(P.V), "vertices": _qm(P.V)}, a.output)
    return OK


def cmd_poly_facets(a):
    P = _load(a.polytope, Polytope).facets()
    _emit(P, a.output)
    return OK


def cmd_poly_slack(a):
    P = _load(a.polytope, Polytope)
    S = slack_matrix(P)
    data = {"type": "slack_matrix", "shape": list(S.shape), "entries": _qm(S.entries)}
    if a.bounds:
        rb = slack_rank_bounds(S, cap=a.cap)
        data["bounds"] = _bounds_json(rb)
    _emit(data, a.output)
    return OK


def _bounds_json(rb) -> dict:
    return {"rank": rb.rank, "rectangle_cover": rb.rectangle_cover,
            "exact_cover": rb.exact_cover, "method": rb.method, "lower_bound": rb.lower_bound}


# --- lifts --------------------------------------------------------------------------

def _build_lift(a):
    if a.family:
        fam = FAMILY_ALIASES.get(a.family)
        if fam is None or a.d is None:
            raise UsageError("--family needs one of A, D, Astar, Dstar and --d")
        return lift_root_cell(fam, a.d)
    if a.congruence:
        d, q = (int(t) for t in a.congruence.split(","))
        return lift_congruence_cell(d, q)
    if a.zonotope_astar:
        d = a.zonotope_astar
        return lift_astar_zonotope(d)
    raise UsageError("give --family/--d, --congruence d,a or --zonotope-astar d")


def cmd_lift_build(a):
    try:
        L = _build_lift(a)
    except ValueError as err:
        raise UsageError(str(err)) from err
    _emit(L, a.output)
    return OK


def _report(rep, extra=None) -> dict:
    data = io.to_json(rep)
    if extra:
        data.update(extra)
    return data


def cmd_lift_verify(a):
    L = _load(a.lift, Lift)
    extra = {}
    if a.corrupt:
        L, (r, c, delta) = corrupt_projection(L, random.Random(a.seed))
        extra["corruption"] = {"row": r, "column": c, "delta": ex.fmt(delta), "seed": a.seed}
    rep = verify_lift(L, jobs=a.jobs)
    _emit(_report(rep, extra), a.output)
    if not rep.exact:
        print(f"verification failed: {len(rep.missed_vertices)} missed, "
              f"{len(rep.escaped_vertices)} escaped", file=sys.stderr)
        return FAILED
    return OK


def cmd_lift_union(a):
    members = [_load(p, Lift) for p in a.lifts]
    U = lift_union(members)
    if all(m.target is not None for m in members):
        U = U.with_target(convex_hull([v for m in members for v in m.target.V]))
    _emit(U, a.output)
    return OK


def cmd_lift_face(a):
    L = _load(a.lift, Lift)
    try:
        F = lift_face(L, io.parse_vector(a.c), io.parse_rational(a.delta))
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return FAILED
    _emit(F, a.output)
    return OK


# --- gadgets ------------------------------------------------------------------------

def read_graph(path: str) -> tuple[int, list]:
    """Edge-list lines "u v" (a lone token adds an isolated node) or JSON {n, edges}."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        try:
            d = json.loads(text)
            return int(d["n"]), [tuple(int(t) for t in e) for e in d["edges"]]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as err:
            raise io.FormatError(f"{path}: malformed graph JSON ({err})") from err
    nodes, raw = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) > 2:
            raise io.FormatError(f"{path}:{lineno}: expected 'u v'")
        for t in parts:
            if t not in nodes:
                nodes.append(t)
        if len(parts) == 2:
            raw.append(tuple(parts))

    def key(t):
        return (0, int(t), t) if t.lstrip("-").isdigit() else (1, 0, t)

    order = {t: i for i, t in enumerate(sorted(nodes, key=key))}
    return len(order), [(order[u], order[v]) for u, v in raw]


def _gadget_run(g, a) -> int:
    extra = {}
    g = build_gadget(g)
    if getattr(a, "perturb_h", False):
        rng = random.Random(a.seed)
        j = rng.randrange(len(g.h))
        g = build_gadget(g, perturbed_h(g, j))
        extra["perturbation"] = {"index": j, "seed": a.seed}
    data = {"type": "gadget", "k": g.k, "m": g.m, "X": len(g.X), "alpha_sq": g.alpha_sq,
            "ambient": g.ambient_dim, "rank": g.lattice.rank, **extra}
    status = OK
    if a.verify or extra:
        rep = verify_gadget(g)
        data.update({"ok": rep.ok, "checks": rep.checks, "face_vertices": rep.face_vertices,
                     "closest": rep.closest,
                     "witnesses": {k: [(_q(v) if isinstance(v, tuple) else v) for v in vs]
                                   for k, vs in rep.witnesses.items()}})
        status = OK if rep.ok else FAILED
    _emit(data, a.output)
    if status:
        print("gadget verification failed", file=sys.stderr)
    return status


def cmd_gadget_stable(a):
    n, edges = read_graph(a.graph)
    A, b, X = stable_set_instance(n, edges)
    return _gadget_run(slack_embedding(A, b, X, k=n), a)


def cmd_gadget_corr(a):
    A, b, X = correlation_instance(a.n)
    return _gadget_run(slack_embedding(A, b, X, k=a.n * a.n), a)


def cmd_gadget_raw(a):
    basis = io.parse_matrix(a.basis) if a.basis else ()
    alpha = io.parse_rational(a.alpha_sq) if a.alpha_sq else None
    return _gadget_run(raw_gadget(basis, io.parse_vector(a.h), alpha), a)


# --- suite --------------------------------------------------------------------------

def run_suite(families, min_d, max_d, congruence=(), tiling=0, seed=0, jobs=1):
    """Root-cell lifts per family and dimension; returns (rows, all_ok)."""
    rows, ok = [], True
    rng = random.Random(seed)
    cases = [(f, d) for f in families for d in range(min_d, max_d + 1)]
    cases += [("cong", dc) for dc in congruence]
    for fam, d in cases:
        t0 = time.perf_counter()
        if fam == "cong":
            dd, q = d
            L, lift = congruence_lattice(dd, q), lift_congruence_cell(dd, q)
            label = f"cong({dd},{q})"
        else:
            if d < 2 and fam in ("D", "Dstar_scaled"):
                continue
            L, lift = parse_family(f"{fam}{d}"), lift_root_cell(fam, d)
            label = f"{fam.replace('_scaled', '')}{d}"
        rv = relevant_vectors(L, jobs=jobs)
        rep = verify_lift(lift, jobs=jobs)
        bounds = slack_rank_bounds(slack_matrix(lift.target))
        row = {"lattice": label, "relevant": len(rv), "lift_facets": lift.facet_count,
               "verified": rep.exact, "target_vertices": len(lift.target.V),
               "target_facets": len(lift.target.facets().ineqs), "cell": lift.meta.get("cell"),
               "xc_bracket": [bounds.lower_bound, lift.facet_count], "bounds": _bounds_json(bounds)}
        if tiling:
            bad = 0
            for _ in range(tiling):
                x = tuple(ex.frac(f"{rng.randint(-40, 40)}/{rng.randint(1, 8)}") for _ in range(L.rank))
                _, cl = closest_vectors(L, x)
                bad += sum(not cell_membership(L, ex.vsub(x, z), rv) for z in cl)
            row["tiling_violations"] = bad
            ok = ok and bad == 0
        row["seconds"] = round(time.perf_counter() - t0, 3)
        ok = ok and rep.exact
        rows.append(row)
    return rows, ok


def format_row(r) -> str:
    line = (f"{r['lattice']}: relevant = {r['relevant']}, lift facets = {r['lift_facets']}, "
            f"verified = {'exact' if r['verified'] else 'FAILED'}")
    return line


def cmd_verify_suite(a):
    fams = []
    for f in a.families.split(","):
        f = f.strip()
        if not f:
            continue
        if f not in FAMILY_ALIASES:
            raise UsageError(f"unknown family {f!r}")
        fams.append(FAMILY_ALIASES[f])
    cong = []
    if a.congruence:
        for part in a.congruence.split(";"):
            try:
                d, q = (int(t) for t in part.split(","))
            except ValueError as err:
                raise UsageError(f"bad congruence pair {part!r}") from err
            cong.append((d, q))
    rows, ok = run_suite(fams, a.min_d, a.max_d, cong, a.tiling, a.seed, a.jobs)
    for r in rows:
        print(format_row(r) + (f"  [{r['seconds']} s]" if a.timings else ""))
    if a.json:
        data = [{k: v for k, v in r.items() if a.timings or k != "seconds"} for r in rows]
        Path(a.json).write_text(io.dumps({"type": "suite", "rows": data, "ok": ok}))
    return OK if ok else FAILED


# --- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vxc", description="Exact Voronoi cells, lifts and gadgets.")
    p.add_argument("--version", action="version", version=f"vxc {__version__}")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    sub = p.add_subparsers(dest="command", required=True)

    def out(sp):
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")
        return sp

    lat = sub.add_parser("lattice").add_subparsers(dest="action", required=True)
    sp = out(lat.add_parser("build", help="named family or explicit basis"))
    sp.add_argument("name", nargs="?", help="A3, D4, Astar2, Dstar4, Z5, E8, cong:d=4,a=2")
    sp.add_argument("--basis", help='rows separated by ";"')
    sp.add_argument("--weights", help="diagonal ambient metric")
    sp.add_argument("--label")
    sp.set_defaults(func=cmd_lattice_build)
    sp = out(lat.add_parser("dual"))
    sp.add_argument("lattice")
    sp.set_defaults(func=cmd_lattice_dual)
    sp = out(lat.add_parser("product"))
    sp.add_argument("first")
    sp.add_argument("second")
    sp.set_defaults(func=cmd_lattice_product)

    sp = out(sub.add_parser("cvp", help="closest lattice vectors"))
    sp.add_argument("lattice")
    sp.add_argument("--point", "--target", dest="point", required=True)
    sp.add_argument("--ambient", action="store_true", help="point is in ambient coordinates")
    sp.set_defaults(func=cmd_cvp)

    vor = sub.add_parser("voronoi").add_subparsers(dest="action", required=True)
    sp = out(vor.add_parser("relevant-vectors"))
    sp.add_argument("lattice")
    sp.set_defaults(func=cmd_relevant)
    sp = out(vor.add_parser("cell"))
    sp.add_argument("lattice")
    sp.add_argument("--vertices", action="store_true")
    sp.add_argument("--dual", action="store_true", help="polar cell instead")
    sp.set_defaults(func=cmd_cell)
    sp = out(vor.add_parser("polar-face"))
    sp.add_argument("lattice")
    sp.add_argument("--point", required=True, help="coefficient vector p")
    sp.set_defaults(func=cmd_polar_face)

    pol = sub.add_parser("polytope").add_subparsers(dest="action", required=True)
    for name, fn in (("dualize", cmd_poly_dualize), ("vertices", cmd_poly_vertices),
                     ("facets", cmd_poly_facets), ("slack", cmd_poly_slack)):
        sp = out(pol.add_parser(name))
        sp.add_argument("polytope")
        if name == "slack":
            sp.add_argument("--bounds", action="store_true")
            sp.add_argument("--cap", type=int, default=20)
        sp.set_defaults(func=fn)

    lif = sub.add_parser("lift").add_subparsers(dest="action", required=True)
    sp = out(lif.add_parser("build"))
    sp.add_argument("--family")
    sp.add_argument("--d", type=int)
    sp.add_argument("--congruence", help="d,a")
    sp.add_argument("--zonotope-astar", type=int, metavar="D")
    sp.set_defaults(func=cmd_lift_build)
    sp = out(lif.add_parser("verify"))
    sp.add_argument("lift")
    sp.add_argument("--corrupt", action="store_true", help="corrupt the projection (uses --seed)")
    sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_lift_verify)
    sp = out(lif.add_parser("union"))
    sp.add_argument("lifts", nargs="+")
    sp.set_defaults(func=cmd_lift_union)
    sp = out(lif.add_parser("face"))
    sp.add_argument("lift")
    sp.add_argument("--c", required=True)
    sp.add_argument("--delta", required=True)
    sp.set_defaults(func=cmd_lift_face)

    gad = sub.add_parser("gadget").add_subparsers(dest="action", required=True)

    def gadget_flags(sp):
        sp.add_argument("--verify", action="store_true")
        sp.add_argument("--perturb-h", action="store_true", help="negative control (uses --seed)")
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        return out(sp)

    sp = gadget_flags(gad.add_parser("stable-set"))
    sp.add_argument("graph")
    sp.set_defaults(func=cmd_gadget_stable)
    sp = gadget_flags(gad.add_parser("correlation"))
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_gadget_corr)
    sp = gadget_flags(gad.add_parser("raw"))
    sp.add_argument("--basis", default="", help="direction space L, rows separated by ';'")
    sp.add_argument("--h", required=True)
    sp.add_argument("--alpha-sq")
    sp.set_defaults(func=cmd_gadget_raw)

    ver = sub.add_parser("verify").add_subparsers(dest="action", required=True)
    sp = ver.add_parser("suite")
    sp.add_argument("--families", default="A,D,Astar,Dstar")
    sp.add_argument("--min-d", type=int, default=2)
    sp.add_argument("--max-d", type=int, default=4)
    sp.add_argument("--congruence", help='pairs "d,a;d,a"')
    sp.add_argument("--tiling", type=int, default=0, help="random points per lattice")
    sp.add_argument("--timings", action="store_true")
    sp.add_argument("--json", help="write the JSON report here")
    sp.set_defaults(func=cmd_verify_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as err:
        return err.code
    try:
        return a.func(a)
    except (UsageError, io.FormatError, RankLimitError, SlackHypothesisError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
