import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from vxc import exact as ex
from vxc.enumeration import (closest_vectors, closest_vectors_ambient, coset_shortest,
                             enumerate_in_ball, shortest_vectors)
from vxc.lattice import Lattice, make_lattice, root_lattice


def box_points(L, center, r2, R):
    """Naive oracle: scan the coefficient box [-R, R]^k around the rounded center."""
    c0 = [round(t) for t in center]
    out = []
    for off in itertools.product(range(-R, R + 1), repeat=L.rank):
        z = tuple(a + b for a, b in zip(c0, off))
        if L.norm2(ex.vsub(z, center)) <= r2:
            out.append(z)
    return sorted(out)


def box_radius(L, r2):
    # |z_i - c_i| <= sqrt(r2 · (G⁻¹)_ii) bounds each coefficient
    Gi = L.gram_inverse
    return max(ex.isqrt_ceil(r2 * Gi[i][i]) for i in range(L.rank)) + 1


@st.composite
def random_lattice(draw):
    # lower triangular keeps the basis nonsingular and the oracle box small
    k = draw(st.integers(1, 3))
    B = [tuple(draw(st.integers(1, 3)) if j == i else draw(st.integers(-2, 2)) if j < i else 0
               for j in range(k)) for i in range(k)]
    return make_lattice(B)


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(random_lattice(), st.lists(st.fractions(-2, 2, max_denominator=4), min_size=3, max_size=3),
       st.fractions(0, 6, max_denominator=3))
def test_ball_enumeration_matches_box_scan(L, center, r2):
    center = center[:L.rank]
    R = box_radius(L, r2)
    assume((2 * R + 1) ** L.rank <= 20000)
    assert enumerate_in_ball(L, center, r2) == box_points(L, center, r2, R)


def test_ball_examples():
    Z2 = root_lattice("Zd", 2)
    assert len(enumerate_in_ball(Z2, (0, 0), 1)) == 5
    A2 = Lattice(gram=((2, -1), (-1, 2)))
    assert len(enumerate_in_ball(A2, (0, 0), 2)) == 7
    assert enumerate_in_ball(root_lattice("D", 4), (0,) * 4, 0) == [(0,) * 4]
    assert enumerate_in_ball(Z2, (0, 0), -1) == []


@pytest.mark.parametrize("family,d,m,count", [
    ("Zd", 3, 1, 6), ("Zd", 6, 1, 12), ("D", 4, 2, 24), ("E8", None, 2, 240), ("A", 3, 2, 12),
])
def test_shortest_vectors(family, d, m, count):
    L = root_lattice(family, d)
    mn, S = shortest_vectors(L)
    assert mn == m and len(S) == count
    assert set(S) == {tuple(-t for t in s) for s in S}
    ball = [z for z in enumerate_in_ball(L, (0,) * L.rank, mn) if any(z)]
    assert ball == S


def test_E8_minimal_vectors_by_ball_count():
    E8 = root_lattice("E8")
    assert len(enumerate_in_ball(E8, (0,) * 8, 2)) == 241


def test_closest_vectors_examples():
    Z2 = root_lattice("Zd", 2)
    d2, cl = closest_vectors(Z2, (Fraction(2, 5), Fraction(3, 5)))
    assert cl == [(0, 1)] and d2 == Fraction(8, 25)
    d2, cl = closest_vectors(Z2, (Fraction(1, 2), Fraction(1, 2)))
    assert len(cl) == 4 and d2 == Fraction(1, 2)


@pytest.mark.parametrize("family,d", [("A", 3), ("D", 4), ("Astar", 3), ("E6", None)])
def test_closest_vectors_properties(family, d):
    L = root_lattice(family, d)
    rng = random.Random(7)
    k = L.rank
    for _ in range(15):
        x = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(k))
        d2, cl = closest_vectors(L, x)
        # brute force oracle over a box around x, when the box is small enough
        R = box_radius(L, d2)
        if (2 * R + 1) ** k <= 20000:
            assert cl == box_points(L, x, d2, R)
        z = tuple(rng.randint(-2, 2) for _ in range(k))
        d2z, clz = closest_vectors(L, ex.vadd(x, z))
        assert d2z == d2
        assert set(clz) == {tuple(a + b for a, b in zip(c, z)) for c in cl}
        assert closest_vectors(L, z) == (0, [z])


def test_closest_vectors_ambient_adds_perpendicular_part():
    A2 = root_lattice("A", 2)
    d2, cl = closest_vectors_ambient(A2, (1, 1, 1))
    assert cl == [(0, 0)] and d2 == 3


def test_coset_shortest_examples():
    Z2 = root_lattice("Zd", 2)
    assert coset_shortest(Z2, (1, 0)) == (1, [(-1, 0), (1, 0)])
    m, reps = coset_shortest(Z2, (1, 1))
    assert m == 2 and len(reps) == 4
    with pytest.raises(ValueError):
        coset_shortest(Z2, (2, 0))


def test_coset_shortest_D4():
    D4 = root_lattice("D", 4)
    c = D4.coefficients((1, 1, 0, 0))
    m, reps = coset_shortest(D4, [int(t) for t in c])
    assert m == 2
    assert {D4.embed(r) for r in reps} == {(1, 1, 0, 0), (-1, -1, 0, 0)}
