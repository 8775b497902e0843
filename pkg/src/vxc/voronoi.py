"""Relevant vectors, Voronoi cells, their duals and polar faces.

Coordinate conventions:

* the Voronoi cell lives in coefficient coordinates x, where the facet for
  a relevant vector v reads (G v)·x <= ½ vᵀGv;
* the dual cell lives in dual-basis coordinates y = (⟨b_i, Y⟩)_i, so its
  vertices are 2 G v / ‖v‖² and the plain dot product x·y is the ambient
  inner product.  With this choice ``dualize(voronoi_cell(L))`` and
  ``dual_voronoi_cell(L)`` are literally the same polytope.

The ``*_ambient`` helpers re-express both cells in the embedding space.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exact as ex
from .enumeration import closest_vectors, coset_shortest, enumerate_in_ball
from .lattice import Lattice
from .polytope import Polytope, redundant_rows

DEFAULT_MAX_RANK = 12


class RankLimitError(ValueError):
    pass


def max_rank() -> int:
    return int(os.environ.get("VXC_MAX_RANK", DEFAULT_MAX_RANK))


@dataclass(frozen=True)
class RelevantVectorSet:
    lattice: Lattice
    vectors: tuple        # integer coefficient vectors, sorted
    norms: tuple          # squared norms, aligned with vectors

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def ambient(self) -> tuple:
        return tuple(self.lattice.embed(v) for v in self.vectors)


def _coset_job(args):
    L, c = args
    return coset_shortest(L, c)


def relevant_vectors(L: Lattice, limit: int | None = None, jobs: int = 1) -> RelevantVectorSet:
    """F(Λ) by the coset sweep: v is relevant iff v + 2Λ has minimisers exactly ±v."""
    k = L.rank
    limit = max_rank() if limit is None else limit
    if k > limit:
        raise RankLimitError(f"rank {k} exceeds the limit {limit} (set VXC_MAX_RANK)")
    # c and -c give the same coset; keep the first nonzero entry positive
    cosets = [c for c in itertools.product((0, 1), repeat=k)
              if any(c) and c[next(i for i, t in enumerate(c) if t)] == 1]
    work = [(L, c) for c in cosets]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_coset_job, work, chunksize=16))
    else:
        results = [_coset_job(w) for w in work]
    vecs = []
    for _, reps in results:
        if len(reps) == 2:
            vecs.extend(reps)
    vecs.sort()
    return RelevantVectorSet(L, tuple(vecs), tuple(L.norm2(v) for v in vecs))


def _rows_of(L: Lattice, vectors):
    return [(ex.matvec(L.gram, v), L.norm2(v) / 2) for v in vectors]


def voronoi_cell(L: Lattice, rv: RelevantVectorSet | None = None) -> Polytope:
    """H-description in coefficient coordinates, one facet per relevant vector."""
    rv = rv or relevant_vectors(L)
    return Polytope(dim=L.rank, ineqs=tuple(_rows_of(L, rv.vectors)), irredundant=True)


def dual_vertices(L: Lattice, vectors) -> tuple:
    """2 G z / ‖z‖² for each z, i.e. 2z/‖z‖² in dual-basis coordinates."""
    return tuple(ex.vscale(2 / L.norm2(z), ex.matvec(L.gram, z)) for z in vectors)


def dual_voronoi_cell(L: Lattice, rv: RelevantVectorSet | None = None) -> Polytope:
    """V-description of VC(Λ)° in dual-basis coordinates."""
    rv = rv or relevant_vectors(L)
    return Polytope(dim=L.rank, vertices=dual_vertices(L, rv.vectors))


@dataclass(frozen=True)
class PolarFace:
    """conv{2z/‖z‖² : z ∈ cl(p)∖{0}}, the face of VC(Λ)° exposed by ⟨p, ·⟩ = 1."""
    polytope: Polytope
    point: tuple              # p in coefficient coordinates
    closest: tuple            # cl(p, Λ) as coefficient vectors
    dist2: Fraction

    @property
    def functional(self) -> tuple:
        """(p, 1): the face is {y ∈ VC(Λ)° : p·y = 1}."""
        return self.point, Fraction(1)


def polar_face(L: Lattice, p: Sequence) -> PolarFace:
    p = ex.vec(p)
    d2, cl = closest_vectors(L, p)
    zero = (0,) * L.rank
    if zero not in cl:
        raise ValueError("0 is not a closest lattice point to p")
    nonzero = [z for z in cl if z != zero]
    if not nonzero:
        raise ValueError("p is interior to the Voronoi cell; the face is empty")
    poly = Polytope(dim=L.rank, vertices=dual_vertices(L, nonzero))
    return PolarFace(poly, p, tuple(cl), d2)


def cell_membership(L: Lattice, x: Sequence, rv: RelevantVectorSet | None = None) -> bool:
    """x ∈ VC(Λ) for a coefficient vector x."""
    rv = rv or relevant_vectors(L)
    x = ex.vec(x)
    return all(ex.dot(a, x) <= b for a, b in _rows_of(L, rv.vectors))


# --- ambient views ----------------------------------------------------------

def _embed_polytope(P: Polytope, to_ambient, from_ambient, eqs) -> Polytope:
    """Push P forward along an injective linear map whose image is cut out by ``eqs``.

    ``to_ambient`` is the map matrix (rows are images of unit vectors) and
    ``from_ambient`` a left inverse (n x k, applied as X ↦ from_ambient · X).
    """
    n = len(to_ambient[0])
    h, e = P.H
    ineqs = tuple((ex.vecmat(a, from_ambient), b) for a, b in h)
    eq_rows = tuple((ex.vecmat(a, from_ambient), b) for a, b in e) + tuple(eqs)
    verts = tuple(ex.vecmat(v, to_ambient) for v in P.V) if P.vertices is not None else None
    return Polytope(dim=n, ineqs=ineqs, eqs=eq_rows, vertices=verts,
                    irredundant=P.irredundant)


def lin_equations(L: Lattice) -> tuple:
    """Equations (n, 0) cutting lin(Λ) out of the ambient space."""
    L._need_basis()
    W = L.weights or (1,) * L.ambient_dim
    # ⟨n, X⟩ = 0 for X ∈ lin(Λ) iff B n = 0; normals are stated in the plain dot product
    return tuple((tuple(wi * ni for wi, ni in zip(W, n)), Fraction(0))
                 for n in ex.nullspace(_weighted_basis(L)))


def _weighted_basis(L: Lattice):
    if L.weights is None:
        return L.basis
    return tuple(tuple(w * x for w, x in zip(L.weights, row)) for row in L.basis)


def voronoi_cell_ambient(L: Lattice, rv: RelevantVectorSet | None = None) -> Polytope:
    P = voronoi_cell(L, rv)
    # x = G⁻¹ B W X
    left = ex.matmul(L.gram_inverse, _weighted_basis(L))
    return _embed_polytope(P, L.basis, left, lin_equations(L))


def dual_voronoi_cell_ambient(L: Lattice, rv: RelevantVectorSet | None = None) -> Polytope:
    P = dual_voronoi_cell(L, rv)
    # Y = (G⁻¹ B)ᵀ y and y = B W Y
    return _embed_polytope(P, ex.matmul(L.gram_inverse, L.basis), _weighted_basis(L),
                           lin_equations(L))


# --- independent oracle ------------------------------------------------------

def irredundant_by_lp(L: Lattice) -> tuple:
    """F(Λ) as the irredundant rows among all ⟨Gz, x⟩ <= ½‖z‖², z in a ball.

    Relevant vectors have norm at most 4μ², and μ² <= ¼ Σ D_i for the LDLᵀ
    diagonal (Babai rounding in the triangular basis), so the ball of
    radius² Σ D_i catches all of them.

    A row z is dropped early when some w ∉ {0, z} has ⟨w, z − w⟩ >= 0: it is
    then the sum of the rows for w and z − w plus a nonnegative slack.  The
    LP decides the rest.
    """
    _, D = L.ldl
    r2 = sum(D, Fraction(0))
    zero = (0,) * L.rank
    cands = [z for z in enumerate_in_ball(L, zero, r2) if z != zero and not _split(L, z)]
    rows = _rows_of(L, cands)
    red = set(redundant_rows(rows, n=L.rank))
    return tuple(sorted(z for i, z in enumerate(cands) if i not in red))


def _split(L: Lattice, z) -> bool:
    # lattice points in the closed ball with diameter [0, z], other than 0 and z
    half = tuple(Fraction(t, 2) for t in z)
    pts = enumerate_in_ball(L, half, L.norm2(z) / 4)
    return any(w != z and any(w) for w in pts)


def dual_cell_from_ball(L: Lattice, r2) -> Polytope:
    """conv{2z/‖z‖² : 0 < ‖z‖² <= r2}, a truncation of the full hull over Λ∖{0}."""
    zero = (0,) * L.rank
    zs = [z for z in enumerate_in_ball(L, zero, r2) if z != zero]
    return Polytope(dim=L.rank, vertices=dual_vertices(L, zs))
