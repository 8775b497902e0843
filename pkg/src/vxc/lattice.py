"""Lattices in Gram-first representation and the named families.

A :class:`Lattice` is a rational Gram matrix, optionally together with a
rational basis in some ambient space.  The ambient space may carry a
diagonal metric (``weights``) so that a coordinate measured in units of an
irrational length still has rational inner products.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exact as ex

FAMILIES = ("Zd", "A", "D", "E6", "E7", "E8", "Astar", "Dstar_scaled")


@dataclass(frozen=True)
class Lattice:
    gram: tuple
    basis: tuple | None = None      # basis vectors as rows, ambient coordinates
    weights: tuple | None = None    # diagonal ambient metric; None means Euclidean
    label: str = ""

    def __post_init__(self):
        G = ex.mat(self.gram)
        object.__setattr__(self, "gram", G)
        if not ex.is_symmetric(G):
            raise ValueError("Gram matrix must be symmetric")
        ex.ldlt(G)  # raises unless positive definite
        if self.basis is not None:
            B = ex.mat(self.basis)
            object.__setattr__(self, "basis", B)
            if len(B) != len(G):
                raise ValueError("basis size does not match Gram matrix")
            if self.weights is not None:
                object.__setattr__(self, "weights", ex.vec(self.weights))
            if _gram_of(B, self.weights) != G:
                raise ValueError("embedding does not reproduce the Gram matrix")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def ambient_dim(self) -> int | None:
        return len(self.basis[0]) if self.basis else None

    def norm2(self, coeffs: Sequence) -> Fraction:
        return ex.quad_form(self.gram, coeffs)

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        return ex.dot(u, ex.matvec(self.gram, v))

    def embed(self, coeffs: Sequence) -> tuple:
        """Ambient coordinates of a coefficient vector."""
        self._need_basis()
        return ex.vecmat(coeffs, self.basis)

    def embed_dual(self, y: Sequence) -> tuple:
        """Ambient point whose inner products with the basis are ``y``."""
        self._need_basis()
        return ex.vecmat(ex.matvec(self.gram_inverse, y), self.basis)

    def coefficients(self, x: Sequence) -> tuple:
        """Coefficients of the orthogonal projection of ambient ``x`` onto lin(Λ)."""
        self._need_basis()
        return ex.matvec(self.gram_inverse, self.ambient_inner_with_basis(x))

    def ambient_inner_with_basis(self, x: Sequence) -> tuple:
        w = self.weights
        if w is None:
            return ex.matvec(self.basis, x)
        return ex.matvec(self.basis, [wi * xi for wi, xi in zip(w, x)])

    def ambient_norm2(self, x: Sequence) -> Fraction:
        w = self.weights or (1,) * len(x)
        return sum((wi * xi * xi for wi, xi in zip(w, x)), Fraction(0))

    def contains(self, x: Sequence) -> bool:
        """Membership of an ambient vector."""
        self._need_basis()
        return ex.solve_integer(self.basis, ex.vec(x)) is not None

    @property
    def gram_inverse(self) -> tuple:
        cached = self.__dict__.get("_ginv")
        if cached is None:
            cached = ex.inverse(self.gram)
            object.__setattr__(self, "_ginv", cached)
        return cached

    @property
    def ldl(self) -> tuple:
        cached = self.__dict__.get("_ldl")
        if cached is None:
            cached = ex.ldlt(self.gram)
            object.__setattr__(self, "_ldl", cached)
        return cached

    def _need_basis(self):
        if self.basis is None:
            raise ValueError(f"lattice {self.label!r} has no embedding")


def _gram_of(B, weights=None):
    if weights is None:
        return tuple(tuple(ex.dot(u, v) for v in B) for u in B)
    return tuple(tuple(sum((w * a * b for w, a, b in zip(weights, u, v)), Fraction(0))
                       for v in B) for u in B)


def make_lattice(basis: Sequence[Sequence], label: str = "", weights=None) -> Lattice:
    """Lattice spanned by the given basis vectors (rows)."""
    B = ex.mat(basis)
    if ex.rank(B) != len(B):
        raise ValueError("basis vectors are linearly dependent")
    return Lattice(gram=_gram_of(B, weights), basis=B, weights=weights, label=label)


def from_generators(gens: Sequence[Sequence], label: str = "") -> Lattice:
    """Lattice generated by a possibly dependent set of rational vectors."""
    return make_lattice(ex.lattice_basis_from_generators(gens), label=label)


def _unit(d, i, scale=1):
    return tuple(Fraction(scale) if j == i else Fraction(0) for j in range(d))


def root_lattice(family: str, d: int | None = None) -> Lattice:
    """Named lattices in their usual ambient coordinates.

    ``Dstar_scaled`` is 2·D_d*, the integral scaling (2Z^d) ∪ (1 + 2Z^d).
    """
    one = Fraction(1)
    if family in ("E6", "E7", "E8"):
        d = int(family[1])
    if d is None or d < 1:
        raise ValueError(f"invalid dimension {d} for {family}")
    if family == "Zd":
        return make_lattice([_unit(d, i) for i in range(d)], label=f"Z{d}")
    if family == "A":
        gens = [tuple(one if j == i else (-one if j == i + 1 else 0) for j in range(d + 1))
                for i in range(d)]
        return make_lattice(gens, label=f"A{d}")
    if family == "D":
        if d < 2:
            raise ValueError("D_d needs d >= 2")
        return from_generators(_d_generators(d), label=f"D{d}")
    if family == "Astar":
        base = root_lattice("A", d).basis
        v1 = tuple([Fraction(1, d + 1)] * d + [Fraction(-d, d + 1)])
        return from_generators([v1, *base], label=f"Astar{d}")
    if family == "Dstar_scaled":
        gens = [_unit(d, i, 2) for i in range(d)] + [(one,) * d]
        return from_generators(gens, label=f"Dstar{d}")
    if family in ("E6", "E7", "E8"):
        e8 = from_generators(_d_generators(8) + [(Fraction(1, 2),) * 8], label="E8")
        if family == "E8":
            return e8
        normals = [ex.vadd(_unit(8, 6), _unit(8, 7))]
        if family == "E6":
            normals.append(ex.vadd(_unit(8, 5), _unit(8, 7)))
        return sublattice_orthogonal(e8, normals, label=family)
    raise ValueError(f"unknown family {family!r}")


def _d_generators(d):
    gens = [ex.vsub(_unit(d, i), _unit(d, i + 1)) for i in range(d - 1)]
    gens.append(ex.vadd(_unit(d, d - 2), _unit(d, d - 1)))
    return gens


def sublattice_orthogonal(L: Lattice, normals: Sequence[Sequence], label: str = "") -> Lattice:
    """{x ∈ Λ : ⟨x, n⟩ = 0 for every normal n}, via an integer kernel."""
    M = [ex.matvec(L.basis, n) for n in normals]
    K = ex.integer_kernel(M, L.rank)
    return make_lattice([ex.vecmat(k, L.basis) for k in K], label=label)


def congruence_lattice(d: int, a: int) -> Lattice:
    """{x ∈ Z^d : x_1 ≡ … ≡ x_d mod a}, generated by a·e_i and the all-ones vector."""
    if d < 1 or a < 1:
        raise ValueError("need d >= 1 and a >= 1")
    gens = [_unit(d, i, a) for i in range(d)] + [(Fraction(1),) * d]
    return from_generators(gens, label=f"cong:d={d},a={a}")


def dual_lattice(L: Lattice) -> Lattice:
    Ginv = L.gram_inverse
    basis = None
    if L.basis is not None:
        basis = ex.matmul(Ginv, L.basis)
    return Lattice(gram=Ginv, basis=basis, weights=L.weights, label=f"dual({L.label})")


def product_lattice(L: Lattice, M: Lattice) -> Lattice:
    k, l = L.rank, M.rank
    G = tuple(tuple(L.gram[i]) + (Fraction(0),) * l for i in range(k)) + \
        tuple((Fraction(0),) * k + tuple(M.gram[j]) for j in range(l))
    basis = weights = None
    if L.basis is not None and M.basis is not None:
        n, m = L.ambient_dim, M.ambient_dim
        basis = tuple(tuple(b) + (Fraction(0),) * m for b in L.basis) + \
            tuple((Fraction(0),) * n + tuple(b) for b in M.basis)
        if L.weights is not None or M.weights is not None:
            weights = tuple(L.weights or (1,) * n) + tuple(M.weights or (1,) * m)
    return Lattice(gram=G, basis=basis, weights=weights, label=f"{L.label}x{M.label}")


def same_lattice(L: Lattice, M: Lattice) -> bool:
    """Equality of embedded lattices (same ambient point set)."""
    if L.basis is None or M.basis is None:
        raise ValueError("comparison needs embeddings")
    return (L.rank == M.rank
            and all(M.contains(b) for b in L.basis)
            and all(L.contains(b) for b in M.basis))


def parse_family(name: str) -> Lattice:
    """Parse CLI shorthands such as ``A3``, ``Dstar4``, ``Z5``, ``E8``, ``cong:d=4,a=2``."""
    name = name.strip()
    m = re.fullmatch(r"cong:d=(\d+),a=(\d+)", name)
    if m:
        return congruence_lattice(int(m.group(1)), int(m.group(2)))
    if name in ("E6", "E7", "E8"):
        return root_lattice(name)
    m = re.fullmatch(r"(Zd|Z|Astar|A|Dstar_scaled|Dstar|D)(\d+)", name)
    if not m:
        raise ValueError(f"unrecognised lattice shorthand {name!r}")
    fam = {"Z": "Zd", "Dstar": "Dstar_scaled"}.get(m.group(1), m.group(1))
    return root_lattice(fam, int(m.group(2)))
