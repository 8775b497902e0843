"""Exact two-phase simplex over the rationals with Bland's rule.

Problems are stated with free variables::

    maximize  c·y   subject to  A y <= b,  E y = f

Variables with an explicit single-variable lower-bound row are shifted to
nonnegative ones (the row is dropped); the rest are split into y⁺ − y⁻.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exact as ex

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"
_ZERO = Fraction(0)


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple | None = None
    value: Fraction | None = None


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows      # list of lists
        self.rhs = rhs        # list
        self.basis = basis    # basic column per row

    def pivot(self, r, c):
        rows, rhs = self.rows, self.rhs
        prow = rows[r]
        p = prow[c]
        if p != 1:
            prow = [x / p if x else _ZERO for x in prow]
            rows[r] = prow
            rhs[r] = rhs[r] / p
        nz = [j for j, x in enumerate(prow) if x]
        prhs = rhs[r]
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[c]
            if not f:
                continue
            for j in nz:
                row[j] -= f * prow[j]
            rhs[i] -= f * prhs
        self.basis[r] = c

    def reduced_costs(self, cost):
        """Reduced costs (minimisation) and current objective value."""
        n = len(cost)
        red = list(cost)
        val = _ZERO
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if not cb:
                continue
            row = self.rows[i]
            for j in range(n):
                if row[j]:
                    red[j] -= cb * row[j]
            val += cb * self.rhs[i]
        return red, val

    def run(self, cost, allowed):
        """Minimise cost·x with Bland's rule; returns OPTIMAL or UNBOUNDED."""
        red, _ = self.reduced_costs(cost)
        while True:
            enter = next((j for j in allowed if red[j] < 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            r = best[1]
            self.pivot(r, enter)
            f = red[enter]
            for j, x in enumerate(self.rows[r]):
                if x:
                    red[j] -= f * x


def _standardize(n, A, b, E, f):
    """Rewrite the free-variable system in nonnegative variables.

    Returns ``(cols, shift, dropped)``: variable j becomes
    ``shift_j + Σ sign·w_col`` over its columns, and the dropped rows are the
    lower bounds absorbed into ``w >= 0``.
    """
    lower = [None] * n
    drop = set()
    for i, (row, bi) in enumerate(zip(A, b)):
        nz = [j for j, a in enumerate(row) if a]
        if len(nz) == 1 and row[nz[0]] < 0:
            j = nz[0]
            lb = bi / row[j]
            if lower[j] is None or lb > lower[j][0]:
                if lower[j] is not None:
                    drop.discard(lower[j][1])
                lower[j] = (lb, i)
                drop.add(i)
    cols = []       # (original var, sign)
    for j in range(n):
        cols.append((j, 1))
        if lower[j] is None:
            cols.append((j, -1))
    shift = [lower[j][0] if lower[j] is not None else _ZERO for j in range(n)]
    return cols, shift, drop


def solve_lp(c: Sequence, A: Sequence[Sequence] = (), b: Sequence = (),
             E: Sequence[Sequence] = (), f: Sequence = (),
             n: int | None = None, maximize: bool = True) -> LPResult:
    A = [ex.vec(r) for r in A]
    E = [ex.vec(r) for r in E]
    b = ex.vec(b)
    f = ex.vec(f)
    c = ex.vec(c)
    if n is None:
        n = len(c)
    cols, shift, drop = _standardize(n, A, b, E, f)
    nw = len(cols)

    def expand(row):
        return [row[j] * s for j, s in cols]

    rows, rhs, slack_of = [], [], []
    for i, (row, bi) in enumerate(zip(A, b)):
        if i in drop:
            continue
        rows.append(expand(row))
        rhs.append(bi - ex.dot(row, shift))
        slack_of.append(True)
    for row, fi in zip(E, f):
        rows.append(expand(row))
        rhs.append(fi - ex.dot(row, shift))
        slack_of.append(False)
    m = len(rows)
    nslack = sum(slack_of)
    # column layout: w (nw) | slacks (nslack) | artificials (m)
    total = nw + nslack + m
    T, basis, art_rows = [], [], []
    s_idx = nw
    for i in range(m):
        row = rows[i] + [_ZERO] * (nslack + m)
        if slack_of[i]:
            row[s_idx] = Fraction(1)
            scol = s_idx
            s_idx += 1
        else:
            scol = None
        r = rhs[i]
        if r < 0:
            row = [-x for x in row]
            r = -r
        if scol is not None and row[scol] == 1:
            basis.append(scol)
        else:
            row[nw + nslack + i] = Fraction(1)
            basis.append(nw + nslack + i)
            art_rows.append(i)
        T.append(row)
        rhs[i] = r
    tab = _Tableau(T, rhs, basis)
    art_start = nw + nslack
    if art_rows:
        cost1 = [_ZERO] * total
        for i in art_rows:
            cost1[art_start + i] = Fraction(1)
        tab.run(cost1, range(total))
        _, val = tab.reduced_costs(cost1)
        if val > 0:
            return LPResult(INFEASIBLE)
        # drive zero-level artificials out of the basis
        keep = []
        for i in range(len(tab.rows)):
            if tab.basis[i] >= art_start:
                j = next((j for j in range(art_start) if tab.rows[i][j]), None)
                if j is None:
                    continue
                tab.pivot(i, j)
            keep.append(i)
        tab.rows = [tab.rows[i][:art_start] for i in keep]
        tab.rhs = [tab.rhs[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
    else:
        tab.rows = [r[:art_start] for r in tab.rows]
    sign = -1 if maximize else 1
    cost2 = [sign * c[j] * s for j, s in cols] + [_ZERO] * nslack
    status = tab.run(cost2, range(art_start))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    w = [_ZERO] * art_start
    for i, bcol in enumerate(tab.basis):
        w[bcol] = tab.rhs[i]
    y = list(shift)
    for k, (j, s) in enumerate(cols):
        if w[k]:
            y[j] += s * w[k]
    y = tuple(y)
    return LPResult(OPTIMAL, y, ex.dot(c, y))


def feasible_point(A=(), b=(), E=(), f=(), n: int | None = None) -> tuple | None:
    if n is None:
        n = len((list(A) + list(E))[0])
    res = solve_lp([0] * n, A, b, E, f, n=n)
    return res.x if res.status == OPTIMAL else None


def farkas_certificate(A=(), b=(), E=(), f=(), n: int | None = None):
    """Multipliers (u >= 0, v) with uᵀA + vᵀE = 0 and u·b + v·f = -1, or None."""
    A = [ex.vec(r) for r in A]
    E = [ex.vec(r) for r in E]
    if n is None:
        n = len((A + E)[0])
    m, p = len(A), len(E)
    nv = m + p
    eq_rows = [[A[i][j] for i in range(m)] + [E[i][j] for i in range(p)] for j in range(n)]
    eq_rhs = [0] * n
    eq_rows.append(list(ex.vec(b)) + list(ex.vec(f)))
    eq_rhs.append(-1)
    nonneg = [[-1 if k == i else 0 for k in range(nv)] for i in range(m)]
    res = solve_lp([0] * nv, nonneg, [0] * m, eq_rows, eq_rhs, n=nv)
    if res.status != OPTIMAL:
        return None
    return res.x[:m], res.x[m:]


def check_certificate(A, b, E, f, u, v) -> bool:
    n = len((list(A) + list(E))[0])
    if any(x < 0 for x in u):
        return False
    comb = [sum((ui * A[i][j] for i, ui in enumerate(u)), _ZERO)
            + sum((vi * E[i][j] for i, vi in enumerate(v)), _ZERO) for j in range(n)]
    rhs = ex.dot(u, ex.vec(b)) + ex.dot(v, ex.vec(f))
    return all(x == 0 for x in comb) and rhs < 0
