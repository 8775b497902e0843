"""Exact lattice-point enumeration on the LDLᵀ form of the Gram matrix.

All searches run in coefficient coordinates.  Results are sorted
lexicographically so repeated runs give identical output.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from . import exact as ex
from .lattice import Lattice


def _search(L: Lattice, center: Sequence, bound, shrink: bool, skip_zero: bool = False):
    """Depth-first interval enumeration.

    With ``shrink`` the bound tightens to the best value found and only the
    minimisers are returned; otherwise every point within ``bound`` is.
    """
    Lm, D = L.ldl
    k = L.rank
    c = ex.vec(center)
    z = [0] * k
    best = [Fraction(bound)]
    found = []

    def rec(i, partial):
        s = Fraction(0)
        for j in range(i + 1, k):
            lji = Lm[j][i]
            if lji:
                s += lji * (z[j] - c[j])
        m = c[i] - s
        room = best[0] - partial
        if room < 0:
            return
        r = ex.isqrt_ceil(room / D[i])
        fl = math.floor(m)
        cands = sorted(range(fl - r, fl + r + 2), key=lambda t: (abs(t - m), t))
        for t in cands:
            dist = partial + D[i] * (t - m) ** 2
            if dist > best[0]:
                break
            z[i] = t
            if i > 0:
                rec(i - 1, dist)
                continue
            if skip_zero and not any(z):
                continue
            if shrink and dist < best[0]:
                best[0] = dist
                found.clear()
            found.append((tuple(z), dist))
        z[i] = 0

    rec(k - 1, Fraction(0))
    if shrink:
        found = [(v, d) for v, d in found if d == best[0]]
    return best[0], sorted(found)


def enumerate_in_ball(L: Lattice, center: Sequence, r2) -> list[tuple]:
    """All lattice coefficient vectors z with ‖z − center‖² ≤ r2."""
    r2 = ex.frac(r2)
    if r2 < 0:
        return []
    _, found = _search(L, center, r2, shrink=False)
    return [v for v, _ in found]


def shortest_vectors(L: Lattice) -> tuple[Fraction, list[tuple]]:
    if L.rank < 1:
        raise ValueError("rank must be positive")
    start = min(L.gram[i][i] for i in range(L.rank))
    m, found = _search(L, [0] * L.rank, start, shrink=True, skip_zero=True)
    return m, [v for v, _ in found]


def closest_vectors(L: Lattice, x: Sequence) -> tuple[Fraction, list[tuple]]:
    """Squared distance from coefficient vector ``x`` to Λ and all minimisers."""
    x = ex.vec(x)
    rounded = [round(t) for t in x]
    start = L.norm2(ex.vsub(rounded, x))
    d, found = _search(L, x, start, shrink=True)
    return d, [v for v, _ in found]


def closest_vectors_ambient(L: Lattice, x: Sequence) -> tuple[Fraction, list[tuple]]:
    """Like :func:`closest_vectors` for an ambient point, possibly outside lin(Λ)."""
    x = ex.vec(x)
    c = L.coefficients(x)
    perp = L.ambient_norm2(x) - L.norm2(c)
    d, cl = closest_vectors(L, c)
    return d + perp, cl


def coset_shortest(L: Lattice, c: Sequence[int]) -> tuple[Fraction, list[tuple]]:
    """Minimisers of ‖·‖² over the coset c + 2Λ."""
    c = tuple(int(t) for t in c)
    if all(t % 2 == 0 for t in c):
        raise ValueError("c lies in 2Λ; the zero coset is excluded")
    # ‖c + 2y‖² = 4‖y + c/2‖²
    d, ys = closest_vectors(L, [Fraction(-t, 2) for t in c])
    reps = sorted(tuple(ci + 2 * yi for ci, yi in zip(c, y)) for y in ys)
    return 4 * d, reps
