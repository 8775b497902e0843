"""Exact rational linear algebra and integer lattice kernels.

Scalars are :class:`fractions.Fraction`; matrices are tuples of row tuples.
Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

Vector = tuple
Matrix = tuple


def frac(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact computations")
    return Fraction(x)


def vec(xs: Iterable) -> Vector:
    return tuple(frac(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def int_vec(xs: Iterable) -> tuple:
    out = []
    for x in xs:
        x = frac(x)
        if x.denominator != 1:
            raise ValueError(f"non-integral entry {x}")
        out.append(int(x))
    return tuple(out)


def shape(M: Sequence[Sequence]) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Matrix:
    return tuple((Fraction(0),) * c for _ in range(r))


def transpose(M: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    if not M:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*M))


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def matvec(M: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in M)


def vecmat(v: Sequence, M: Sequence[Sequence]) -> Vector:
    if not M:
        return ()
    return tuple(dot(v, col) for col in zip(*M))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    cols = tuple(zip(*B)) if B else ()
    return tuple(tuple(dot(row, col) for col in cols) for row in A)


def vadd(u, v) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v) -> Vector:
    return tuple(c * a for a in v)


def quad_form(G: Sequence[Sequence], u: Sequence) -> Fraction:
    """uᵀ G u."""
    return dot(u, matvec(G, u))


def is_symmetric(G: Sequence[Sequence]) -> bool:
    n = len(G)
    return all(len(r) == n for r in G) and all(
        G[i][j] == G[j][i] for i in range(n) for j in range(i))


def row_echelon(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    R = [[frac(x) for x in row] for row in M]
    nrows, ncols = shape(R)
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        piv = R[r][c]
        R[r] = [x / piv for x in R[r]]
        for i in range(nrows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return R[:r], pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M or not M[0]:
        return 0
    return len(row_echelon(M)[1])


def nullspace(M: Sequence[Sequence], n: int | None = None) -> Matrix:
    """Rational basis (as rows) of {x : M x = 0}."""
    if n is None:
        n = len(M[0]) if M else 0
    if not M:
        return identity(n)
    R, piv = row_echelon(M)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, pc in zip(R, piv):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return tuple(basis)


def det(M: Sequence[Sequence]) -> Fraction:
    A = [[frac(x) for x in row] for row in M]
    n = len(A)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c] != 0:
                f = A[i][c] / A[c][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return d


def inverse(M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    aug = [list(map(frac, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    R, piv = row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in R)


def solve(M: Sequence[Sequence], b: Sequence) -> Vector | None:
    """Some solution of M x = b, or None when inconsistent."""
    n = len(M[0]) if M else 0
    aug = [list(map(frac, row)) + [frac(bi)] for row, bi in zip(M, b)]
    R, piv = row_echelon(aug)
    if piv and piv[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(R, piv):
        x[pc] = row[n]
    return tuple(x)


def common_denominator(xs: Iterable[Fraction]) -> int:
    d = 1
    for x in xs:
        q = frac(x).denominator
        d = d * q // gcd(d, q)
    return d


def primitive(v: Sequence) -> tuple:
    """Scale a rational vector to a primitive integer vector (positive multiple)."""
    d = common_denominator(v)
    ints = [int(x * d) for x in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(a // g for a in ints) if g else tuple(ints)


# --- integer kernels -------------------------------------------------------

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf(M: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``H = U M``, ``U`` unimodular, pivots positive,
    entries above each pivot reduced into ``[0, pivot)`` and zero rows last.
    """
    H = [list(int_vec(row)) for row in M]
    m = len(H)
    n = len(H[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            # [[x, y], [-q, p]] has determinant 1
            H[r], H[i] = ([x * u + y * v for u, v in zip(H[r], H[i])],
                          [-q * u + p * v for u, v in zip(H[r], H[i])])
            U[r], U[i] = ([x * u + y * v for u, v in zip(U[r], U[i])],
                          [-q * u + p * v for u, v in zip(U[r], U[i])])
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-u for u in H[r]]
            U[r] = [-u for u in U[r]]
        piv = H[r][c]
        for i in range(r):
            f = H[i][c] // piv
            if f:
                H[i] = [u - f * v for u, v in zip(H[i], H[r])]
                U[i] = [u - f * v for u, v in zip(U[i], U[r])]
        r += 1
    return H, U


def integer_kernel(M: Sequence[Sequence], n: int | None = None) -> tuple:
    """Saturated basis of {z ∈ Zⁿ : M z = 0}, returned as integer row tuples in HNF."""
    if n is None:
        n = len(M[0]) if M else 0
    rows = [primitive(vec(r)) for r in M]
    rows = [r for r in rows if any(r)]
    if not rows:
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    # HNF of Mᵀ: rows of U whose image vanishes span the kernel.
    T = [list(col) for col in zip(*rows)]
    H, U = hnf(T)
    kern = [U[i] for i in range(n) if not any(H[i])]
    if not kern:
        return ()
    K, _ = hnf(kern)
    return tuple(tuple(r) for r in K if any(r))


def lattice_basis_from_generators(gens: Sequence[Sequence]) -> Matrix:
    """Rational basis rows of the Z-span of ``gens`` (HNF-reduced)."""
    gens = [vec(g) for g in gens]
    d = common_denominator(x for g in gens for x in g)
    H, _ = hnf([[int(x * d) for x in g] for g in gens])
    return tuple(tuple(Fraction(x, d) for x in row) for row in H if any(row))


def solve_integer(basis_rows: Sequence[Sequence], x: Sequence) -> tuple | None:
    """Integer coefficients c with Σ c_i basis_i = x, or None."""
    sol = solve(transpose(basis_rows), x)
    if sol is None or any(v.denominator != 1 for v in sol):
        return None
    # basis rows independent: the rational solution is unique
    return tuple(int(v) for v in sol)


# --- Gram-form helpers -----------------------------------------------------

def ldlt(G: Sequence[Sequence]) -> tuple[Matrix, Vector]:
    """Exact ``G = L D Lᵀ`` with L unit lower triangular and D > 0."""
    G = mat(G)
    n = len(G)
    if not is_symmetric(G):
        raise ValueError("Gram matrix is not symmetric")
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        D[j] = G[j][j] - sum((L[j][k] ** 2 * D[k] for k in range(j)), Fraction(0))
        if D[j] <= 0:
            raise ValueError("Gram matrix is not positive definite")
        for i in range(j + 1, n):
            s = G[i][j] - sum((L[i][k] * L[j][k] * D[k] for k in range(j)), Fraction(0))
            L[i][j] = s / D[j]
    return tuple(map(tuple, L)), tuple(D)


def isqrt_floor(q) -> int:
    """Largest integer m ≥ 0 with m² ≤ q."""
    q = frac(q)
    if q < 0:
        raise ValueError("negative input")
    m = isqrt(q.numerator // q.denominator)
    while (m + 1) ** 2 <= q:
        m += 1
    return m


def isqrt_ceil(q) -> int:
    """Smallest integer m ≥ 0 with m² ≥ q."""
    m = isqrt_floor(q)
    return m if m * m == q else m + 1


def fmt(x) -> str:
    x = frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
