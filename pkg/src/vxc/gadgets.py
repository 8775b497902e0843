"""Equal-norm gadget lattices for 0/1 polytopes.

Pipeline: a 0/1 system Ax <= b whose slacks on solutions are 0/1 is
embedded as constant-weight points (x, 1-x, s, 1-s); their affine hull H
yields a lattice Λ and a point p such that cl(p, Λ) is {0} plus one point per
solution, so a face of the polar Voronoi cell projects onto conv(X).

The lattice lives in R^K × αZ with α² = K/2 irrational in general; the last
coordinate is kept in α-units and carries metric weight α².
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exact as ex
from .enumeration import closest_vectors
from .lattice import Lattice, make_lattice
from .voronoi import polar_face

ENUM_LIMIT = 20   # largest k for exhaustive {0,1}^k enumeration


class SlackHypothesisError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GadgetInstance:
    k: int                    # original variables
    m: int                    # constraints
    A: tuple
    b: tuple
    X: tuple                  # 0/1 solutions, k-vectors
    Xprime: tuple             # embedded points, all of squared norm alpha_sq
    eqs: tuple                # rows N with H = {y : N y = N h}
    h: tuple
    alpha_sq: int
    lattice: Lattice | None = None
    p: tuple | None = None    # ambient, last coordinate in α-units
    meta: dict = field(default_factory=dict)

    @property
    def ambient_dim(self) -> int:
        return len(self.h)


def _binary(k):
    return itertools.product((0, 1), repeat=k)


def solutions(A, b, k: int) -> tuple:
    """All x ∈ {0,1}^k with Ax <= b, in lexicographic order."""
    if k > ENUM_LIMIT:
        raise ValueError(f"k = {k} exceeds the enumeration limit {ENUM_LIMIT}")
    return tuple(x for x in _binary(k) if all(ex.dot(a, x) <= bi for a, bi in zip(A, b)))


def slack_embedding(A: Sequence[Sequence], b: Sequence, X: Sequence[Sequence] | None = None,
                    k: int | None = None) -> GadgetInstance:
    """X' = {(x, 1-x, s, 1-s) : x ∈ X, s = b - Ax}, all of weight k + m."""
    A, b = ex.mat(A), ex.vec(b)
    m = len(A)
    if k is None:
        k = len(A[0]) if A else len(X[0])
    if X is None:
        X = solutions(A, b, k)
    X = tuple(ex.int_vec(x) for x in X)
    if not X:
        raise ValueError("X is empty")
    Xp = []
    for x in X:
        if any(t not in (0, 1) for t in x):
            raise SlackHypothesisError(f"{x} is not a 0/1 vector")
        s = ex.vsub(b, ex.matvec(A, x))
        for i, si in enumerate(s):
            if si not in (0, 1):
                raise SlackHypothesisError(f"slack {ex.fmt(si)} of row {i} at x = {x} is not 0/1")
        s = tuple(int(t) for t in s)
        Xp.append(x + tuple(1 - t for t in x) + s + tuple(1 - t for t in s))
    if k <= ENUM_LIMIT and set(X) != set(solutions(A, b, k)):
        raise ValueError("X is not the set of 0/1 solutions of Ax <= b")
    Xp.sort()
    # A x + s = b, x + x' = 1, s + s' = 1
    K = 2 * k + 2 * m
    N = []
    for i in range(m):
        N.append(tuple(A[i]) + (0,) * k + tuple(int(j == i) for j in range(m)) + (0,) * m)
    for i in range(k):
        N.append(tuple(int(j == i) for j in range(k)) * 2 + (0,) * (2 * m))
    for i in range(m):
        N.append((0,) * (2 * k) + tuple(int(j == i) for j in range(m)) * 2)
    h = Xp[0]
    alpha_sq = k + m
    assert all(sum(y) == alpha_sq for y in Xp)
    return GadgetInstance(k, m, A, b, X, tuple(Xp), ex.mat(N) if N else (), h, alpha_sq,
                          meta={"ambient": K})


def equal_norm_lattice(L_basis: Sequence[Sequence], h: Sequence, alpha_sq: int,
                       ambient: int | None = None) -> tuple[Lattice, tuple]:
    """Λ = {(z', t) ∈ Z^K × Z : z' + t·h ∈ L, ⟨1, z'⟩ + t·α² = 0} with weights (1, …, 1, α²).

    Returns the lattice and p = (0, …, 0, -1), i.e. (0, -α).
    """
    h = ex.vec(h)
    K = len(h) if ambient is None else ambient
    alpha_sq = ex.frac(alpha_sq)
    if alpha_sq <= 0:
        raise ValueError("alpha_sq must be positive")
    L_basis = [ex.vec(r) for r in L_basis if any(r)]
    N = ex.nullspace(L_basis, K) if L_basis else ex.identity(K)
    return _lattice_from_equations(N, h, alpha_sq)


def _lattice_from_equations(N, h, alpha_sq) -> tuple[Lattice, tuple]:
    K = len(h)
    rows = [tuple(r) + (ex.dot(r, h),) for r in N]
    rows.append((Fraction(1),) * K + (alpha_sq,))
    kern = ex.integer_kernel(rows, K + 1)
    if not kern:
        raise ValueError("the gadget lattice is trivial")
    weights = (Fraction(1),) * K + (alpha_sq,)
    L = make_lattice(kern, label="gadget", weights=weights)
    p = (Fraction(0),) * K + (Fraction(-1),)
    return L, p


def build_gadget(g: GadgetInstance, h: Sequence | None = None) -> GadgetInstance:
    """Attach the lattice and p; ``h`` overrides the base point (for negative controls)."""
    h = g.h if h is None else ex.vec(h)
    L, p = _lattice_from_equations(g.eqs, h, g.alpha_sq) if g.eqs else \
        equal_norm_lattice([], h, g.alpha_sq)
    return GadgetInstance(g.k, g.m, g.A, g.b, g.X, g.Xprime, g.eqs, tuple(h), g.alpha_sq,
                          L, p, dict(g.meta))


def raw_gadget(L_basis: Sequence[Sequence], h: Sequence, alpha_sq=None) -> GadgetInstance:
    """Gadget for an arbitrary affine H = L + h; X = {0,1}^K ∩ H must have equal norms."""
    h = ex.vec(h)
    K = len(h)
    L_basis = [ex.vec(r) for r in L_basis if any(r)]
    N = ex.nullspace(L_basis, K) if L_basis else ex.identity(K)
    rhs = ex.matvec(N, h)
    X = tuple(x for x in _binary(K) if ex.matvec(N, x) == rhs) if K <= ENUM_LIMIT else None
    if X is None:
        raise ValueError(f"dimension {K} exceeds the enumeration limit {ENUM_LIMIT}")
    if not X:
        raise ValueError("H contains no 0/1 point")
    norms = {sum(x) for x in X}
    if len(norms) != 1:
        raise ValueError(f"0/1 points of H have different norms: {sorted(norms)}")
    a2 = norms.pop()
    if alpha_sq is not None and ex.frac(alpha_sq) != a2:
        raise ValueError(f"alpha_sq = {alpha_sq} but the 0/1 points have norm² {a2}")
    if a2 == 0:
        raise ValueError("X = {0}: the face is empty and the claim is trivial")
    return GadgetInstance(K, 0, (), (), X, X, N, h, a2, meta={"ambient": K, "raw": True})


@dataclass(frozen=True)
class GadgetReport:
    ok: bool
    checks: dict              # name -> bool
    witnesses: dict           # name -> list of offending points
    rank: int
    face_vertices: int
    closest: int


def verify_gadget(g: GadgetInstance) -> GadgetReport:
    """Check cl(p, Λ) = U, the polar face formula, and the projection onto X."""
    if g.lattice is None:
        g = build_gadget(g)
    L, a2 = g.lattice, ex.frac(g.alpha_sq)
    K = g.ambient_dim
    U = {(0,) * (K + 1)} | {tuple(y) + (-1,) for y in g.Xprime}
    U = {ex.vec(u) for u in U}
    checks, wit = {}, {}

    c = L.coefficients(g.p)
    perp = L.ambient_norm2(g.p) - L.norm2(c)
    d2, cl = closest_vectors(L, c)
    cl_amb = {L.embed(z) for z in cl}
    checks["closest"] = cl_amb == U and d2 + perp == a2
    wit["closest"] = sorted(cl_amb ^ U)
    if d2 + perp != a2:
        wit["closest_dist2"] = [ex.fmt(d2 + perp)]

    expected = {ex.vscale(2 / L.ambient_norm2(u), u) for u in U if any(u)}
    try:
        face = polar_face(L, c)
        got = {L.embed_dual(y) for y in face.polytope.V}
        n_face = len(face.polytope.V)
    except ValueError as err:
        got, n_face = set(), 0
        wit["face_error"] = [str(err)]
    checks["face"] = got == expected
    wit["face"] = sorted(got ^ expected)

    # vertices are u/α² = (x'/α², -1/α²); scaling by α² and keeping the x block recovers X
    images = [tuple(a2 * t for t in y[:g.k]) for y in got]
    X = {ex.vec(x) for x in g.X}
    checks["projection"] = len(images) == len(set(images)) and set(images) == X
    wit["projection"] = sorted(set(images) ^ X)

    ok = all(checks.values())
    return GadgetReport(ok, checks, {k: v for k, v in wit.items() if v}, L.rank, n_face, len(cl))


def perturbed_h(g: GadgetInstance, index: int, delta=1) -> tuple:
    h = list(g.h)
    h[index] += ex.frac(delta)
    return tuple(h)


# --- instances ---------------------------------------------------------------------

def stable_set_instance(n: int, edges: Sequence[tuple[int, int]]):
    """Edge constraints x_i + x_j <= 1 and all stable sets (nodes 0..n-1)."""
    E = sorted({tuple(sorted(e)) for e in edges})
    for i, j in E:
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"invalid edge ({i}, {j})")
    A = tuple(tuple(1 if t in e else 0 for t in range(n)) for e in E)
    b = (1,) * len(E)
    X = tuple(x for x in _binary(n) if all(x[i] + x[j] <= 1 for i, j in E))
    return A, b, X


def correlation_instance(n: int):
    """Variables Y_ij (row-major); X = {xxᵀ : x ∈ {0,1}^n}.

    For each ordered pair i != j: Y_ij <= Y_ii, Y_ij <= Y_jj, Y_ii + Y_jj - 1 <= Y_ij.
    """
    k = n * n

    def idx(i, j):
        return i * n + j

    A, b = [], []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            row = [0] * k
            row[idx(i, j)], row[idx(i, i)] = 1, -1
            A.append(tuple(row)); b.append(0)
            row = [0] * k
            row[idx(i, j)], row[idx(j, j)] = 1, -1
            A.append(tuple(row)); b.append(0)
            row = [0] * k
            row[idx(i, i)], row[idx(j, j)], row[idx(i, j)] = 1, 1, -1
            A.append(tuple(row)); b.append(1)
    X = sorted(tuple(x[i] * x[j] for i in range(n) for j in range(n)) for x in _binary(n))
    return tuple(A), tuple(b), tuple(X)
