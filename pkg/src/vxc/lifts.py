"""Extended formulations (lifts) and their exact verification.

A lift is a polyhedron Q ⊂ R^N, given by inequalities and equations, with
an affine map π into the target space.  Its size is the number of
inequalities of Q; equations are free.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exact as ex
from . import lp
from .lattice import congruence_lattice, root_lattice
from .polytope import AffineMap, Polytope, UnboundedError
from .voronoi import dual_voronoi_cell_ambient, voronoi_cell_ambient

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True, eq=False)
class Lift:
    q: Polytope
    proj: AffineMap
    target: Polytope | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.q.ineqs is None:
            raise ValueError("a lift needs an H-description of Q")
        if self.proj.source_dim != self.q.dim:
            raise ValueError("projection does not start in Q's space")
        if self.target is not None and self.target.dim != self.proj.target_dim:
            raise ValueError("projection does not land in the target's space")

    @property
    def facet_count(self) -> int:
        return len(self.q.ineqs)

    @property
    def source_dim(self) -> int:
        return self.q.dim

    @property
    def target_dim(self) -> int:
        return self.proj.target_dim

    def with_target(self, target: Polytope | None, **meta) -> "Lift":
        return Lift(self.q, self.proj, target, {**self.meta, **meta})


def _pad(row, before, after):
    return (_ZERO,) * before + tuple(row) + (_ZERO,) * after


def _cols_to_matrix(cols, m):
    """Matrix with the given columns (each of length m)."""
    return tuple(tuple(c[i] for c in cols) for i in range(m))


# --- building blocks ----------------------------------------------------------

def self_lift(P: Polytope) -> Lift:
    """Q = P with the identity map."""
    P = P.facets() if not P.irredundant else P
    ineqs, eqs = P.H
    return Lift(Polytope(P.dim, ineqs, eqs, irredundant=True), AffineMap.identity(P.dim), P,
                {"kind": "self"})


def lift_simplex(points: Sequence[Sequence]) -> Lift:
    """conv(points) as the image of the standard simplex; one facet per point.

    A single point gives Q = {1} with no inequalities.
    """
    pts = [ex.vec(p) for p in points]
    m, n = len(pts), len(pts[0])
    ones = ((_ONE,) * m, _ONE)
    ineqs = () if m == 1 else tuple((_pad((-_ONE,), i, m - i - 1), _ZERO) for i in range(m))
    q = Polytope(m, ineqs, (ones,), irredundant=True)
    return Lift(q, AffineMap.linear(_cols_to_matrix(pts, n)), None, {"kind": "simplex"})


def lift_point(p: Sequence) -> Lift:
    return lift_simplex([p])


def lift_cube(d: int, r=1) -> Lift:
    """Self-lift of [-r, r]^d."""
    r = ex.frac(r)
    ineqs = []
    for i in range(d):
        for s in (1, -1):
            ineqs.append((_pad((Fraction(s),), i, d - i - 1), r))
    q = Polytope(d, tuple(ineqs), irredundant=True)
    return Lift(q, AffineMap.identity(d), None, {"kind": "cube", "radius": ex.fmt(r)})


def lift_crosspolytope(d: int, r=1) -> Lift:
    """r·conv{±e_i} from λ⁺, λ⁻ >= 0 with Σ λ⁺ + Σ λ⁻ = 1; 2d facets."""
    r = ex.frac(r)
    pts = [ex.vscale(s * r, _pad((_ONE,), i, d - i - 1)) for s in (1, -1) for i in range(d)]
    lf = lift_simplex(pts)
    return Lift(lf.q, lf.proj, None, {"kind": "crosspolytope", "radius": ex.fmt(r)})


def lift_orbit(v: Sequence) -> Lift:
    """conv{σ(v) : σ ∈ S_d} as the image of the Birkhoff polytope; d² facets.

    Variables are X_ij in row-major order and τ(X)_i = Σ_j v_j X_ij.
    """
    v = ex.vec(v)
    d = len(v)
    N = d * d
    ineqs = tuple((_pad((-_ONE,), k, N - k - 1), _ZERO) for k in range(N))
    eqs = []
    for i in range(d):
        eqs.append((tuple(_ONE if k // d == i else _ZERO for k in range(N)), _ONE))
    for j in range(d):
        eqs.append((tuple(_ONE if k % d == j else _ZERO for k in range(N)), _ONE))
    M = tuple(tuple(v[k % d] if k // d == i else _ZERO for k in range(N)) for i in range(d))
    q = Polytope(N, ineqs, tuple(eqs), irredundant=True)
    return Lift(q, AffineMap.linear(M), None, {"kind": "orbit", "v": [ex.fmt(x) for x in v]})


def lift_zonotope(generators: Sequence[Sequence]) -> Lift:
    """Σ [-g/2, g/2] as the image of [-1, 1]^m under e_i ↦ g_i/2."""
    gens = [ex.vec(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    m, n = len(gens), len(gens[0])
    cube = lift_cube(m)
    M = _cols_to_matrix([ex.vscale(Fraction(1, 2), g) for g in gens], n)
    return Lift(cube.q, AffineMap.linear(M), None, {"kind": "zonotope", "generators": m})


# --- combinators ----------------------------------------------------------------

def _stack(q1: Polytope, q2: Polytope, extra_eqs=()) -> Polytope:
    n1, n2 = q1.dim, q2.dim
    ineqs = [(_pad(a, 0, n2), b) for a, b in q1.ineqs] + [(_pad(a, n1, 0), b) for a, b in q2.ineqs]
    eqs = [(_pad(a, 0, n2), b) for a, b in q1.eqs] + [(_pad(a, n1, 0), b) for a, b in q2.eqs]
    return Polytope(n1 + n2, tuple(ineqs), tuple(eqs) + tuple(extra_eqs))


def lift_product(L1: Lift, L2: Lift) -> Lift:
    n1, n2 = L1.source_dim, L2.source_dim
    M = tuple(_pad(r, 0, n2) for r in L1.proj.matrix) + tuple(_pad(r, n1, 0) for r in L2.proj.matrix)
    proj = AffineMap(M, L1.proj.offset + L2.proj.offset)
    return Lift(_stack(L1.q, L2.q), proj, None, {"kind": "product"})


def _check_same_target(L1: Lift, L2: Lift):
    if L1.target_dim != L2.target_dim:
        raise ValueError(f"target dimensions differ: {L1.target_dim} vs {L2.target_dim}")


def lift_minkowski(L1: Lift, L2: Lift) -> Lift:
    _check_same_target(L1, L2)
    M = tuple(tuple(r1) + tuple(r2) for r1, r2 in zip(L1.proj.matrix, L2.proj.matrix))
    proj = AffineMap(M, ex.vadd(L1.proj.offset, L2.proj.offset))
    return Lift(_stack(L1.q, L2.q), proj, None, {"kind": "minkowski"})


def lift_intersection(L1: Lift, L2: Lift) -> Lift:
    """{(y, z) : y ∈ Q1, z ∈ Q2, π1(y) = π2(z)} projected by π1."""
    _check_same_target(L1, L2)
    n2 = L2.source_dim
    couple = tuple((tuple(r1) + tuple(-x for x in r2), o2 - o1)
                   for r1, r2, o1, o2 in zip(L1.proj.matrix, L2.proj.matrix,
                                             L1.proj.offset, L2.proj.offset))
    M = tuple(_pad(r, 0, n2) for r in L1.proj.matrix)
    return Lift(_stack(L1.q, L2.q, couple), AffineMap(M, L1.proj.offset), None,
                {"kind": "intersection"})


def _negative_scaling_feasible(q: Polytope) -> bool:
    """Whether A y <= -b, E y = -f has a solution, i.e. λ < 0 survives homogenisation."""
    A = [a for a, _ in q.ineqs]
    E = [a for a, _ in q.eqs]
    b = [-x for _, x in q.ineqs]
    f = [-x for _, x in q.eqs]
    return lp.feasible_point(A, b, E, f, n=q.dim) is not None


def lift_union(lifts: Sequence[Lift]) -> Lift:
    """Balas lift of conv(⋃ π_i(Q_i)).

    Member i contributes a block (y_i, λ_i) with A_i y_i <= λ_i b_i and
    E_i y_i = λ_i f_i; all λ_i sum to one.  The sign constraint λ_i >= 0 is
    implied for bounded members unless the homogenised block tolerates λ_i < 0,
    which happens for point-like members; only then is it added.
    """
    lifts = list(lifts)
    if not lifts:
        raise ValueError("need at least one member")
    m = lifts[0].target_dim
    for lf in lifts[1:]:
        _check_same_target(lifts[0], lf)
    for i, lf in enumerate(lifts):
        if lp.feasible_point([a for a, _ in lf.q.ineqs], [b for _, b in lf.q.ineqs],
                             [a for a, _ in lf.q.eqs], [b for _, b in lf.q.eqs],
                             n=lf.q.dim) is None:
            raise ValueError(f"member {i} is empty")
    sizes = [lf.source_dim + 1 for lf in lifts]
    N = sum(sizes)
    starts = [sum(sizes[:i]) for i in range(len(lifts))]
    ineqs, eqs, signs = [], [], []
    cols = []
    for lf, s, sz in zip(lifts, starts, sizes):
        after = N - s - sz
        for a, b in lf.q.ineqs:
            ineqs.append((_pad(tuple(a) + (-b,), s, after), _ZERO))
        for a, f in lf.q.eqs:
            eqs.append((_pad(tuple(a) + (-f,), s, after), _ZERO))
        if _negative_scaling_feasible(lf.q):
            ineqs.append((_pad((-_ONE,), s + sz - 1, after), _ZERO))
            signs.append(s + sz - 1)
        cols.extend(list(zip(*lf.proj.matrix)) if lf.proj.matrix and lf.source_dim else [])
        cols.append(lf.proj.offset)
    lam_idx = {s + sz - 1 for s, sz in zip(starts, sizes)}
    lam = tuple(_ONE if k in lam_idx else _ZERO for k in range(N))
    eqs.append((lam, _ONE))
    M = _cols_to_matrix(cols, m)
    q = Polytope(N, tuple(ineqs), tuple(eqs))
    return Lift(q, AffineMap.linear(M), None,
                {"kind": "union", "members": len(lifts), "sign_constraints": len(signs)})


def lift_face(L: Lift, c: Sequence, delta) -> Lift:
    """Lift of the face {x ∈ target : c·x = δ}; fails unless c·x <= δ is valid."""
    c, delta = ex.vec(c), ex.frac(delta)
    row = ex.vecmat(c, L.proj.matrix) if L.proj.matrix else ()
    rhs = delta - ex.dot(c, L.proj.offset)
    res = _maximize(L.q, row)
    if res.status == lp.UNBOUNDED or (res.status == lp.OPTIMAL and res.value > rhs):
        raise ValueError("inequality is not valid for the lift's image")
    q = Polytope(L.q.dim, L.q.ineqs, L.q.eqs + ((row, rhs),))
    target = None
    if L.target is not None:
        vs = [v for v in L.target.V if ex.dot(c, v) == delta]
        target = Polytope(L.target.dim, vertices=vs) if vs else None
    return Lift(q, L.proj, target, {**L.meta, "face": True})


# --- named constructions ----------------------------------------------------------

def _unit(n, i, s=1):
    return _pad((Fraction(s),), i, n - i - 1)


def lift_root_cell(family: str, d: int) -> Lift:
    """Lifts of the Voronoi cell (Astar, Dstar_scaled) or its polar (A, D).

    For A and D the target is the dual cell in ambient coordinates; the
    primal bound follows from xc(P) = xc(P°), recorded in ``meta``.
    """
    if family == "A":
        if d < 1:
            raise ValueError("A_d needs d >= 1")
        n = d + 1
        lf = lift_minkowski(lift_simplex([_unit(n, i) for i in range(n)]),
                            lift_simplex([_unit(n, i, -1) for i in range(n)]))
        target = dual_voronoi_cell_ambient(root_lattice("A", d))
        which = "dual"
    elif family == "D":
        if d < 2:
            raise ValueError("D_d needs d >= 2")
        lf = lift_intersection(lift_crosspolytope(d, 2), lift_cube(d, 1))
        target = dual_voronoi_cell_ambient(root_lattice("D", d))
        which = "dual"
    elif family == "Astar":
        if d < 1:
            raise ValueError("A_d* needs d >= 1")
        v = [Fraction(-d + 2 * i, 2 * d + 2) for i in range(d + 1)]
        lf = lift_orbit(v)
        target = voronoi_cell_ambient(root_lattice("Astar", d))
        which = "primal"
    elif family == "Dstar_scaled":
        if d < 2:
            raise ValueError("D̄_d* needs d >= 2")
        lf = lift_intersection(lift_cube(d, 1), lift_crosspolytope(d, Fraction(d, 2)))
        target = voronoi_cell_ambient(root_lattice("Dstar_scaled", d))
        which = "primal"
    else:
        raise ValueError(f"unknown family {family!r}")
    meta = {"family": family, "d": d, "cell": which}
    if which == "dual":
        meta["note"] = "lift of the polar cell; xc(P) = xc(P°)"
    return lf.with_target(target, **meta)


def congruence_pieces(d: int, a: int) -> list[tuple[str, Lift]]:
    """Member lifts whose union is the polar Voronoi cell of Λ_d(a)."""
    if d < 2 or a < 1:
        raise ValueError("need d >= 2 and a >= 1")
    one = (_ONE,) * d
    pieces = [("segment", lift_simplex([ex.vscale(Fraction(2, d), one),
                                        ex.vscale(Fraction(-2, d), one)])),
              ("cross", lift_crosspolytope(d, Fraction(2, a)))]
    for k in range(1, d):
        for l in sorted({math.floor(Fraction(a * k, d)), math.ceil(Fraction(a * k, d))}):
            scale = Fraction(2, k * (a - l) ** 2 + (d - k) * l ** 2)
            v = [scale * (a - l)] * k + [scale * (-l)] * (d - k)
            pieces.append((f"orbit k={k} l={l}", lift_orbit(v)))
    return pieces


def lift_congruence_cell(d: int, a: int) -> Lift:
    pieces = congruence_pieces(d, a)
    lf = lift_union([p for _, p in pieces])
    target = dual_voronoi_cell_ambient(congruence_lattice(d, a))
    return lf.with_target(target, family="congruence", d=d, a=a, cell="dual",
                          pieces=[name for name, _ in pieces],
                          note="lift of the polar cell; xc(P) = xc(P°)")


def lift_astar_zonotope(d: int) -> Lift:
    """VC(A_d*) as the zonotope of the d(d+1)/2 segments (e_i - e_j)/(d+1), i < j."""
    n = d + 1
    gens = [tuple(Fraction(int(t == i) - int(t == j), n) for t in range(n))
            for i in range(n) for j in range(i + 1, n)]
    target = voronoi_cell_ambient(root_lattice("Astar", d))
    return lift_zonotope(gens).with_target(target, family="Astar", d=d, cell="primal",
                                           construction="zonotope")


def redundant_members(members: Sequence[Lift], target: Polytope) -> list[int]:
    """Members that can be dropped together: every target vertex stays reached.

    Members are tried in order and dropped greedily, so the result depends on
    the order but the kept members always cover the target's vertices.
    """
    owners = [{i for i, lf in enumerate(members) if _reaches(lf, v)} for v in target.V]
    dropped = set()
    for i in range(len(members)):
        if all(o - dropped - {i} for o in owners):
            dropped.add(i)
    return sorted(dropped)


# --- verification -------------------------------------------------------------------

@dataclass(frozen=True)
class VerifyReport:
    exact: bool
    missed_vertices: tuple      # target vertices outside π(Q)
    escaped_vertices: tuple     # images of Q-vertices outside the target
    facet_count: int


def _maximize(q: Polytope, c) -> lp.LPResult:
    return lp.solve_lp(c, [a for a, _ in q.ineqs], [b for _, b in q.ineqs],
                       [a for a, _ in q.eqs], [b for _, b in q.eqs], n=q.dim)


def _reaches(L: Lift, v) -> bool:
    """v ∈ π(Q), by exact LP feasibility."""
    M, o = L.proj.matrix, L.proj.offset
    q = L.q
    eqs = [a for a, _ in q.eqs] + list(M)
    f = [b for _, b in q.eqs] + list(ex.vsub(v, o))
    return lp.feasible_point([a for a, _ in q.ineqs], [b for _, b in q.ineqs], eqs, f,
                             n=q.dim) is not None


def _reach_job(args):
    L, v = args
    return _reaches(L, v)


def verify_lift(L: Lift, jobs: int = 1) -> VerifyReport:
    """Exact check that π(Q) equals the target.

    (a) every target inequality is maximised over Q by LP; an optimum above
        the right-hand side is a vertex of Q whose image escapes.
    (b) every target vertex is tested for membership in π(Q) by LP.
    """
    if L.target is None:
        raise ValueError("lift has no target")
    T = L.target
    ineqs, eqs = T.H
    M = L.proj.matrix
    escaped = []

    def image_value(c, sense):
        row = ex.vecmat(c, M)
        res = _maximize(L.q, ex.vscale(sense, row))
        if res.status == lp.UNBOUNDED:
            raise UnboundedError("Q is unbounded along a target direction")
        if res.status == lp.INFEASIBLE:
            return None, None
        x = L.proj(res.x)
        return ex.dot(c, x), x

    empty = False
    for a, b in ineqs:
        val, x = image_value(a, 1)
        if val is None:
            empty = True
            break
        if val > b:
            escaped.append(x)
    if not empty:
        for a, f in eqs:
            for sense in (1, -1):
                val, x = image_value(a, sense)
                if ex.dot(a, x) != f:
                    escaped.append(x)
    escaped = tuple(dict.fromkeys(escaped))
    verts = T.V
    if jobs > 1 and len(verts) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            hits = list(pool.map(_reach_job, [(L, v) for v in verts]))
    else:
        hits = [_reaches(L, v) for v in verts]
    missed = tuple(v for v, h in zip(verts, hits) if not h)
    return VerifyReport(not escaped and not missed, missed, escaped, L.facet_count)


def corrupt_projection(L: Lift, rng) -> tuple[Lift, tuple]:
    """Copy of L with one projection entry increased by a positive amount.

    Negative shifts can turn an entry 1 into -1, a reflection that may be a
    symmetry of the target and so not a corruption at all.  Returns the
    corrupted lift and (row, column, delta); ``rng`` is a ``random.Random``.
    """
    M = [list(r) for r in L.proj.matrix]
    r = rng.randrange(len(M))
    c = rng.randrange(len(M[0]))
    delta = Fraction(rng.choice((1, 2)), rng.choice((1, 2, 3)))
    M[r][c] += delta
    return Lift(L.q, AffineMap(M, L.proj.offset), L.target, {**L.meta, "corrupted": True}), \
        (r, c, delta)
