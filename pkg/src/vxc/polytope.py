"""Exact polytopes with both descriptions, double description and friends.

A :class:`Polytope` keeps an H-description (inequalities ``a·x <= b`` plus
equations ``a·x = b``) and/or a V-description (vertex list).  Whichever is
missing is computed on first access and cached; the value is still
immutable as a point set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from . import exact as ex
from . import lp

_ZERO = Fraction(0)


class EmptyPolytopeError(ValueError):
    pass


class UnboundedError(ValueError):
    pass


# --- canonical forms --------------------------------------------------------

def canonical_ineq(a: Sequence, b) -> tuple:
    """Integer primitive positive multiple of (a, b)."""
    return ex.primitive(tuple(a) + (b,))


def canonical_eq(a: Sequence, b) -> tuple:
    p = ex.primitive(tuple(a) + (b,))
    lead = next((x for x in p if x), 0)
    return tuple(-x for x in p) if lead < 0 else p


def _rref_key(rows: Sequence[Sequence]) -> tuple:
    if not rows:
        return ()
    R, _ = ex.row_echelon(rows)
    return tuple(tuple(r) for r in R)


# --- affine maps --------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    matrix: tuple           # target_dim rows × source_dim columns
    offset: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrix", ex.mat(self.matrix))
        object.__setattr__(self, "offset", ex.vec(self.offset))
        if len(self.matrix) != len(self.offset):
            raise ValueError("offset length must equal the number of matrix rows")

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(ex.identity(n), (0,) * n)

    @classmethod
    def linear(cls, matrix) -> "AffineMap":
        matrix = ex.mat(matrix)
        return cls(matrix, (0,) * len(matrix))

    @property
    def target_dim(self) -> int:
        return len(self.offset)

    @property
    def source_dim(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def __call__(self, x: Sequence) -> tuple:
        return ex.vadd(ex.matvec(self.matrix, x), self.offset) if self.matrix else self.offset

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self ∘ inner."""
        M = ex.matmul(self.matrix, inner.matrix)
        return AffineMap(M, self(inner.offset))


# --- the Polytope value -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Polytope:
    dim: int
    ineqs: tuple | None = None
    eqs: tuple = ()
    vertices: tuple | None = None
    irredundant: bool = False

    def __post_init__(self):
        if self.ineqs is None and self.vertices is None:
            raise ValueError("a polytope needs an H- or a V-description")
        if self.ineqs is not None:
            object.__setattr__(self, "ineqs", tuple((ex.vec(a), ex.frac(b)) for a, b in self.ineqs))
        object.__setattr__(self, "eqs", tuple((ex.vec(a), ex.frac(b)) for a, b in self.eqs))
        if self.vertices is not None:
            vs = tuple(dict.fromkeys(ex.vec(v) for v in self.vertices))
            object.__setattr__(self, "vertices", vs)

    @classmethod
    def from_h(cls, A, b, eqs=()) -> "Polytope":
        A = ex.mat(A)
        n = len(A[0]) if A else len(eqs[0][0])
        return cls(n, tuple(zip(A, ex.vec(b))), tuple(eqs))

    @classmethod
    def from_v(cls, points) -> "Polytope":
        return convex_hull(points)

    # lazy completion ---------------------------------------------------------
    @property
    def V(self) -> tuple:
        if self.vertices is None:
            object.__setattr__(self, "vertices",
                               vertex_enumeration(self.ineqs, self.eqs, self.dim))
        return self.vertices

    @property
    def H(self) -> tuple:
        """(inequalities, equations)."""
        if self.ineqs is None:
            ineqs, eqs, verts = facet_enumeration(self.vertices, self.dim)
            # keep only extreme points from here on
            object.__setattr__(self, "vertices", verts)
            object.__setattr__(self, "ineqs", ineqs)
            object.__setattr__(self, "eqs", eqs)
            object.__setattr__(self, "irredundant", True)
        return self.ineqs, self.eqs

    @property
    def A(self) -> tuple:
        return tuple(a for a, _ in self.H[0])

    @property
    def b(self) -> tuple:
        return tuple(b for _, b in self.H[0])

    @property
    def num_facets(self) -> int:
        return len(self.facets().ineqs)

    def contains(self, x: Sequence) -> bool:
        ineqs, eqs = self.H
        x = ex.vec(x)
        return (all(ex.dot(a, x) <= b for a, b in ineqs)
                and all(ex.dot(a, x) == b for a, b in eqs))

    def affine_dim(self) -> int:
        vs = self.V
        return ex.rank([ex.vsub(v, vs[0]) for v in vs[1:]]) if len(vs) > 1 else 0

    def facets(self) -> "Polytope":
        """Same polytope with an irredundant H-description (vertex incidence test)."""
        if self.irredundant and self.ineqs is not None:
            return self
        ineqs, eqs = self.H
        vs = self.V
        d = self.affine_dim()
        keep, seen = [], set()
        for a, b in ineqs:
            key = canonical_ineq(*_reduce_mod_eqs(a, b, eqs))
            if key in seen:
                continue
            tight = [v for v in vs if ex.dot(a, v) == b]
            if all(ex.dot(a, v) == b for v in vs):
                continue    # implicit equality
            if len(tight) >= d and (d == 0 or ex.rank([ex.vsub(v, tight[0]) for v in tight[1:]]) == d - 1):
                keep.append((a, b))
                seen.add(key)
        eq_rows = _affine_hull_eqs(vs, self.dim)
        return Polytope(self.dim, tuple(keep), eq_rows, vs, irredundant=True)

    def same_set(self, other: "Polytope") -> bool:
        return self.dim == other.dim and set(self.facets().V) == set(other.facets().V)

    def h_key(self) -> tuple:
        """Canonical H-description for set comparison (irredundant, eq-reduced)."""
        P = self.facets()
        eqs = P.eqs
        ineq = frozenset(canonical_ineq(*_reduce_mod_eqs(a, b, eqs)) for a, b in P.ineqs)
        return ineq, _rref_key([tuple(a) + (b,) for a, b in eqs])

    def __repr__(self):
        parts = [f"dim={self.dim}"]
        if self.ineqs is not None:
            parts.append(f"ineqs={len(self.ineqs)}")
        if self.eqs:
            parts.append(f"eqs={len(self.eqs)}")
        if self.vertices is not None:
            parts.append(f"vertices={len(self.vertices)}")
        return f"Polytope({', '.join(parts)})"


def _reduce_mod_eqs(a, b, eqs):
    """Reduce an inequality modulo the equation rows (eliminate eq pivot columns)."""
    if not eqs:
        return tuple(a), b
    R, piv = ex.row_echelon([tuple(e) + (f,) for e, f in eqs])
    row = list(a) + [b]
    for r, pc in zip(R, piv):
        if pc < len(a) and row[pc]:
            fac = row[pc]
            row = [x - fac * y for x, y in zip(row, r)]
    return tuple(row[:-1]), row[-1]


def _affine_hull_eqs(points, n):
    if not points:
        return ()
    p0 = points[0]
    diffs = [ex.vsub(p, p0) for p in points[1:]]
    normals = ex.nullspace(diffs, n) if diffs else ex.identity(n)
    out = []
    for c in normals:
        key = canonical_eq(c, ex.dot(c, p0))
        out.append((tuple(Fraction(x) for x in key[:-1]), Fraction(key[-1])))
    return tuple(out)


# --- integer helpers for double description -------------------------------------

def _int_rank(rows: Iterable[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    n = len(rows[0])
    rk = 0
    for c in range(n):
        p = next((i for i in range(rk, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[rk], rows[p] = rows[p], rows[rk]
        pr = rows[rk]
        pv = pr[c]
        for i in range(rk + 1, len(rows)):
            f = rows[i][c]
            if f:
                new = [pv * x - f * y for x, y in zip(rows[i], pr)]
                g = 0
                for x in new:
                    g = gcd(g, x)
                rows[i] = [x // g for x in new] if g > 1 else new
        rk += 1
        if rk == len(rows):
            break
    return rk


def _prim(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def dd_cone(rows: Sequence[Sequence], n: int) -> list[tuple]:
    """Extreme rays of the pointed cone {y ∈ Rⁿ : M y <= 0}.

    Double description: a simplicial start from n independent rows, then the
    remaining rows in index order, with an algebraic (rank) adjacency test.
    Rays are primitive integer vectors.
    """
    M = [ex.primitive(r) for r in rows]
    start, rest = [], []
    for i, r in enumerate(M):
        if len(start) < n and _int_rank([M[j] for j in start] + [r]) == len(start) + 1:
            start.append(i)
        else:
            rest.append(i)
    if len(start) < n:
        raise UnboundedError("constraint matrix lacks full column rank (lineality)")
    M0inv = ex.inverse([M[i] for i in start])
    rays = []
    for j in range(n):
        col = [-M0inv[i][j] for i in range(n)]
        r = ex.primitive(col)
        zero = frozenset(start[k] for k in range(n) if k != j)
        rays.append((r, zero))
    for t in rest:
        a = M[t]
        pos, neg, zer = [], [], []
        for r, z in rays:
            s = sum(x * y for x, y in zip(a, r))
            (pos if s > 0 else neg if s < 0 else zer).append((r, z, s))
        new = [(r, z) for r, z, _ in neg] + [(r, z | {t}) for r, z, _ in zer]
        for (rp, zp, sp), (rq, zq, sq) in itertools.product(pos, neg):
            Z = zp & zq
            if len(Z) < n - 2:
                continue
            if _int_rank(M[i] for i in Z) != n - 2:
                continue
            r = _prim([sp * x - sq * y for x, y in zip(rq, rp)])
            new.append((r, Z | {t}))
        rays = new
    return [r for r, _ in rays]


# --- conversions ----------------------------------------------------------------

def _parametrize(eqs, n):
    """x = x0 + Σ u_i N_i for the solution set of the equations."""
    if not eqs:
        return (_ZERO,) * n, ex.identity(n)
    x0 = ex.solve([a for a, _ in eqs], [b for _, b in eqs])
    if x0 is None:
        raise EmptyPolytopeError("inconsistent equations")
    return x0, ex.nullspace([a for a, _ in eqs], n)


def vertex_enumeration(ineqs, eqs=(), n: int | None = None) -> tuple:
    """Vertices of a bounded H-polyhedron."""
    ineqs = tuple((ex.vec(a), ex.frac(b)) for a, b in ineqs)
    eqs = tuple((ex.vec(a), ex.frac(b)) for a, b in eqs)
    if n is None:
        n = len((ineqs or eqs)[0][0])
    x0, N = _parametrize(eqs, n)
    r = len(N)
    red = [(ex.matvec(N, a), b - ex.dot(a, x0)) for a, b in ineqs]
    if r == 0:
        if all(b >= 0 for _, b in red):
            return (x0,)
        raise EmptyPolytopeError("empty polytope")
    cone = [tuple(a) + (-b,) for a, b in red] + [(_ZERO,) * r + (Fraction(-1),)]
    rays = dd_cone(cone, r + 1)
    verts = set()
    for ray in rays:
        s = ray[-1]
        if s == 0:
            raise UnboundedError("polyhedron is unbounded")
        u = [Fraction(x, s) for x in ray[:-1]]
        verts.add(ex.vadd(x0, ex.vecmat(u, N)))
    if not verts:
        raise EmptyPolytopeError("empty polytope")
    return tuple(sorted(verts))


def facet_enumeration(points, n: int | None = None):
    """Irredundant H-description of conv(points).

    Returns ``(ineqs, eqs, vertices)``; the vertices are the extreme points
    among the input.
    """
    pts = sorted(set(ex.vec(p) for p in points))
    if not pts:
        raise EmptyPolytopeError("no points given")
    if n is None:
        n = len(pts[0])
    p0 = pts[0]
    diffs = [ex.vsub(p, p0) for p in pts[1:]]
    R, piv = ex.row_echelon(diffs) if diffs else ([], [])
    r = len(piv)
    eqs = _affine_hull_eqs(pts, n)
    if r == 0:
        return (), eqs, (p0,)
    coords = [tuple(ex.vsub(p, p0)[c] for c in piv) for p in pts]
    cen = tuple(sum((u[i] for u in coords), _ZERO) / len(coords) for i in range(r))
    shifted = [ex.vsub(u, cen) for u in coords]
    polar = vertex_enumeration([(w, 1) for w in shifted], (), r)
    ineqs = []
    for y in polar:
        a = [_ZERO] * n
        for yi, c in zip(y, piv):
            a[c] = yi
        b = 1 + sum((yi * (p0[c] + ci) for yi, c, ci in zip(y, piv, cen)), _ZERO)
        key = canonical_ineq(a, b)
        ineqs.append((tuple(Fraction(x) for x in key[:-1]), Fraction(key[-1])))
    ineqs.sort()
    verts = []
    for p, w in zip(pts, shifted):
        tight = [y for y in polar if ex.dot(y, w) == 1]
        if ex.rank(tight) == r:
            verts.append(p)
    return tuple(ineqs), eqs, tuple(verts)


def convex_hull(points) -> Polytope:
    pts = [ex.vec(p) for p in points]
    ineqs, eqs, verts = facet_enumeration(pts)
    return Polytope(len(pts[0]), ineqs, eqs, verts, irredundant=True)


# --- operations -------------------------------------------------------------------

def dualize(P: Polytope) -> Polytope:
    """Polar P° = {y ∈ lin(P) : ⟨x, y⟩ <= 1 for x ∈ P}.

    Vertices of P° follow the order of P's (irredundant) inequalities and its
    inequalities follow the order of P's vertices, so slack matrices transpose.
    """
    P = P.facets()
    ineqs, eqs = P.ineqs, P.eqs
    if any(b != 0 for _, b in eqs):
        raise ValueError("origin is not in the affine hull")
    if not interior_origin(P):
        raise ValueError("origin is not in the relative interior")
    E = [a for a, _ in eqs]
    ws = [_project_lin(ex.vscale(1 / b, a), E) for a, b in ineqs]
    new_ineqs = tuple((v, Fraction(1)) for v in P.V)
    return Polytope(P.dim, new_ineqs, eqs, ws, irredundant=True)


def interior_origin(P: Polytope) -> bool:
    """0 in the relative interior: every facet inequality strict at 0 (checked by LP)."""
    P = P.facets()
    ineqs, eqs = P.ineqs, P.eqs
    if any(b != 0 for _, b in eqs):
        return False
    # maximise t subject to a·x + t <= b, eqs, x = 0; t > 0 iff strictly interior
    n = P.dim
    A = [tuple(a) + (Fraction(1),) for a, _ in ineqs]
    fix = [tuple(Fraction(int(i == j)) for j in range(n)) + (_ZERO,) for i in range(n)]
    res = lp.solve_lp([0] * n + [1], A + [(_ZERO,) * n + (Fraction(1),)],
                      [b for _, b in ineqs] + [1], fix, [0] * n, n=n + 1)
    return res.status == lp.OPTIMAL and res.value > 0


def _project_lin(v, E):
    if not E:
        return tuple(v)
    EEt = ex.matmul(E, ex.transpose(E))
    coef = ex.solve(EEt, ex.matvec(E, v))
    return ex.vsub(v, ex.vecmat(coef, E))


def affine_image(P: Polytope, m: AffineMap) -> Polytope:
    return convex_hull([m(v) for v in P.V])


def product(P: Polytope, Q: Polytope) -> Polytope:
    verts = [tuple(p) + tuple(q) for p in P.V for q in Q.V]
    ineqs = [(tuple(a) + (_ZERO,) * Q.dim, b) for a, b in P.H[0]] + \
            [((_ZERO,) * P.dim + tuple(a), b) for a, b in Q.H[0]]
    eqs = [(tuple(a) + (_ZERO,) * Q.dim, b) for a, b in P.H[1]] + \
          [((_ZERO,) * P.dim + tuple(a), b) for a, b in Q.H[1]]
    return Polytope(P.dim + Q.dim, tuple(ineqs), tuple(eqs), verts)


def lp_feasible(ineqs=(), eqs=(), extra_eqs=(), n: int | None = None):
    """Exact feasibility: ``(True, point)`` or ``(False, (u, v))`` Farkas multipliers."""
    allq = list(eqs) + list(extra_eqs)
    A = [a for a, _ in ineqs]
    b = [b for _, b in ineqs]
    E = [a for a, _ in allq]
    f = [b for _, b in allq]
    if n is None:
        n = len((A + E)[0])
    x = lp.feasible_point(A, b, E, f, n=n)
    if x is not None:
        return True, x
    cert = lp.farkas_certificate(A, b, E, f, n=n)
    return False, cert


def redundant_rows(ineqs, eqs=(), n: int | None = None) -> list[int]:
    """Indices of inequalities implied by the others (duplicates keep the first).

    Row i is redundant iff min{λ·b + μ·f : λᵀA + μᵀE = a_i, λ >= 0} <= b_i,
    the LP dual of maximising a_i·x over the remaining system.
    """
    ineqs = [(ex.vec(a), ex.frac(b)) for a, b in ineqs]
    eqs = [(ex.vec(a), ex.frac(b)) for a, b in eqs]
    if n is None:
        n = len(ineqs[0][0])
    keys = [canonical_ineq(a, b) for a, b in ineqs]
    out, seen = [], set()
    for i, (a, b) in enumerate(ineqs):
        if keys[i] in seen:
            out.append(i)
            continue
        seen.add(keys[i])
        others = [r for j, r in enumerate(ineqs) if keys[j] != keys[i]]
        m, p = len(others), len(eqs)
        cols = [ai for ai, _ in others] + [e for e, _ in eqs]
        E = [tuple(col[k] for col in cols) for k in range(n)]
        cost = [bi for _, bi in others] + [fi for _, fi in eqs]
        nonneg = [tuple(Fraction(-1) if k == j else _ZERO for k in range(m + p)) for j in range(m)]
        res = lp.solve_lp(cost, nonneg, [0] * m, E, a, n=m + p, maximize=False)
        if res.status == lp.OPTIMAL and res.value <= b:
            out.append(i)
    return out


def fm_project(P: Polytope, keep: Sequence[int]) -> Polytope:
    """Fourier–Motzkin projection onto the coordinates ``keep`` (in that order)."""
    n = P.dim
    ineqs, eqs = P.H
    ineqs = [list(a) + [b] for a, b in ineqs]
    eqs = [list(a) + [b] for a, b in eqs]
    drop = [j for j in range(n) if j not in keep]
    for j in drop:
        piv = next((e for e in eqs if e[j] != 0), None)
        if piv is not None:
            eqs.remove(piv)
            def sub(row, piv=piv):
                if row[j] == 0:
                    return row
                f = row[j] / piv[j]
                return [x - f * y for x, y in zip(row, piv)]
            eqs = [sub(e) for e in eqs]
            ineqs = [sub(r) for r in ineqs]
            continue
        pos = [r for r in ineqs if r[j] > 0]
        neg = [r for r in ineqs if r[j] < 0]
        new = [r for r in ineqs if r[j] == 0]
        for p in pos:
            for q in neg:
                new.append([-q[j] * x + p[j] * y for x, y in zip(p, q)])
        ineqs = _clean_rows(new, eqs, n)
    A = [tuple(r[k] for k in keep) for r in ineqs]
    b = [r[-1] for r in ineqs]
    E = [(tuple(r[k] for k in keep), r[-1]) for r in eqs if any(r[k] for k in keep)]
    return Polytope(len(keep), tuple(zip(A, b)), tuple(E))


def _clean_rows(rows, eqs, n):
    rows = [r for r in rows if any(r[:-1]) or r[-1] < 0]
    if any(not any(r[:-1]) for r in rows):
        raise EmptyPolytopeError("projection is empty")
    uniq = {}
    for r in rows:
        uniq.setdefault(canonical_ineq(r[:-1], r[-1]), r)
    rows = list(uniq.values())
    red = set(redundant_rows([(r[:-1], r[-1]) for r in rows],
                             [(e[:-1], e[-1]) for e in eqs], n))
    return [r for i, r in enumerate(rows) if i not in red]


# --- slack matrices -----------------------------------------------------------------

@dataclass(frozen=True)
class SlackMatrix:
    entries: tuple
    row_labels: tuple
    col_labels: tuple

    @property
    def shape(self):
        return len(self.entries), len(self.col_labels)

    def transpose(self) -> "SlackMatrix":
        return SlackMatrix(ex.transpose(self.entries, len(self.col_labels)),
                           self.col_labels, self.row_labels)


def slack_matrix(P: Polytope, normalize: bool = False) -> SlackMatrix:
    """S[i][j] = b_i − a_i·v_j; with ``normalize`` each row is scaled to right-hand side 1."""
    ineqs, _ = P.H
    vs = P.V
    rows = []
    for a, b in ineqs:
        if normalize:
            if b <= 0:
                raise ValueError("normalisation needs positive right-hand sides")
            a, b = ex.vscale(1 / b, a), Fraction(1)
        row = tuple(b - ex.dot(a, v) for v in vs)
        if any(x < 0 for x in row):
            raise ValueError("negative slack: descriptions are inconsistent")
        rows.append(row)
    return SlackMatrix(tuple(rows), tuple(range(len(ineqs))), tuple(range(len(vs))))


@dataclass(frozen=True)
class RankBounds:
    rank: int
    rectangle_cover: int
    exact_cover: bool
    method: str

    @property
    def lower_bound(self) -> int:
        return max(self.rank, self.rectangle_cover)


def slack_rank_bounds(S, cap: int = 20, budget: int = 20000) -> RankBounds:
    """Lower bounds on the nonnegative rank: linear rank and rectangle covering.

    Up to ``cap``×``cap`` the minimum rectangle cover of the support is
    searched exhaustively within ``budget`` nodes; beyond that, or when the
    budget runs out, a greedy fooling set gives a weaker certified bound.
    """
    E = S.entries if isinstance(S, SlackMatrix) else ex.mat(S)
    if any(x < 0 for r in E for x in r):
        raise ValueError("matrix must be nonnegative")
    rk = ex.rank(E) if E and E[0] else 0
    support = [frozenset(j for j, x in enumerate(r) if x) for r in E]
    if len(E) <= cap and (not E or len(E[0]) <= cap):
        value, exact = min_rectangle_cover(support, budget)
        if exact:
            return RankBounds(rk, value, True, "exhaustive")
        return RankBounds(rk, value, False, "fooling set (search budget exhausted)")
    return RankBounds(rk, fooling_set_size(support), False, "greedy fooling set")


def _maximal_rectangles(support):
    rows = range(len(support))
    allcols = frozenset().union(*support) if support else frozenset()
    intents = {allcols}
    for s in support:
        intents |= {X & s for X in intents}
    rects = []
    for X in intents:
        if not X:
            continue
        R = frozenset(i for i in rows if X <= support[i])
        if R:
            rects.append(frozenset((i, j) for i in R for j in X))
    # drop non-maximal ones
    rects.sort(key=len, reverse=True)
    out = []
    for r in rects:
        if not any(r <= o for o in out):
            out.append(r)
    return out


def min_rectangle_cover(support, budget: int | None = None) -> tuple[int, bool]:
    """Minimum number of all-nonzero rectangles covering the support.

    Branch and bound with a fooling-set lower bound at every node.  Returns
    ``(value, True)`` when the optimum was proved; if ``budget`` nodes are
    exhausted, returns ``(fooling set size, False)``, still a valid lower bound.
    """
    cells = frozenset((i, j) for i, s in enumerate(support) for j in s)
    if not cells:
        return 0, True
    rects = _maximal_rectangles(support)
    by_cell = {c: [r for r in rects if c in r] for c in cells}
    root_lb = fooling_set_size(support)
    best = [0]
    left = set(cells)
    while left:
        r = max(rects, key=lambda r: len(r & left))
        left -= r
        best[0] += 1
    nodes = [0]

    class _Budget(Exception):
        pass

    def search(uncovered, used):
        if not uncovered:
            best[0] = min(best[0], used)
            return
        nodes[0] += 1
        if budget is not None and nodes[0] > budget:
            raise _Budget
        if used + fooling_set_size(support, uncovered) >= best[0]:
            return
        cell = min(uncovered, key=lambda c: len(by_cell[c]))
        for r in sorted(by_cell[cell], key=lambda r: -len(r & uncovered)):
            search(uncovered - r, used + 1)
            if best[0] == root_lb:
                return

    if best[0] > root_lb:
        try:
            search(cells, 0)
        except _Budget:
            return root_lb, False
    return best[0], True


def fooling_set_size(support, cells=None) -> int:
    """Greedy fooling set among ``cells`` (default: the whole support).

    Chosen cells are pairwise not coverable by one rectangle, so any cover of
    them needs at least this many rectangles.
    """
    if cells is None:
        cells = ((i, j) for i, s in enumerate(support) for j in s)
    cells = sorted(cells)
    chosen = []
    for (i, j) in cells:
        if all(not (l in support[i] and j in support[k]) for k, l in chosen):
            chosen.append((i, j))
    return len(chosen)
