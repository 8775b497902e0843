import itertools

import pytest

from vxc import exact as ex
from vxc.enumeration import closest_vectors
from vxc.gadgets import (SlackHypothesisError, build_gadget, correlation_instance,
                         equal_norm_lattice, perturbed_h, raw_gadget, slack_embedding, solutions,
                         stable_set_instance, verify_gadget)
from vxc.lattice import same_lattice


def brute_closest_ambient(g):
    """cl(p, Λ) by scanning a box of ambient candidates (z', t) and testing membership.

    0 ∈ Λ gives ‖z - p‖² <= α² for a closest z, so |z'_i| <= 1 when α² < 4 and
    α²(t + 1)² <= α² forces t ∈ {-2, -1, 0}.
    """
    L = g.lattice
    K = g.ambient_dim
    a2 = g.alpha_sq
    assert a2 < 4
    best, out = None, []
    for t in (-2, -1, 0):
        for zp in itertools.product((-1, 0, 1), repeat=K):
            z = zp + (t,)
            if not L.contains(z):
                continue
            d = sum(x * x for x in zp) + a2 * (t + 1) ** 2
            if best is None or d < best:
                best, out = d, [z]
            elif d == best:
                out.append(z)
    return best, {ex.vec(z) for z in out}


def test_K2_slack_embedding():
    A, b, X = stable_set_instance(2, [(0, 1)])
    assert set(X) == {(0, 0), (1, 0), (0, 1)}
    g = slack_embedding(A, b, X)
    assert set(g.Xprime) == {(0, 0, 1, 1, 1, 0), (1, 0, 0, 1, 0, 1), (0, 1, 1, 0, 0, 1)}
    assert all(sum(y) == 3 for y in g.Xprime)
    assert g.alpha_sq == 3 and g.k == 2 and g.m == 1
    assert g.h == min(g.Xprime)
    for y in g.Xprime:
        assert all(ex.dot(r, y) == ex.dot(r, g.h) for r in g.eqs)


def test_empty_system_is_complementation():
    g = slack_embedding((), (), k=2)
    assert set(g.X) == set(itertools.product((0, 1), repeat=2))
    assert set(g.Xprime) == {x + tuple(1 - t for t in x) for x in g.X}
    assert g.alpha_sq == 2


def test_fractional_slack_is_rejected():
    with pytest.raises(SlackHypothesisError):
        slack_embedding([("1/2", 0)], [1], None, 2)
    with pytest.raises(SlackHypothesisError):
        slack_embedding([(1, 1)], [2], None, 2)     # slack 2 at x = 0


def test_X_must_be_the_full_solution_set():
    with pytest.raises(ValueError):
        slack_embedding([(1, 1)], [1], [(0, 0)])


def test_solutions():
    assert set(solutions([(1, 1)], [1], 2)) == {(0, 0), (1, 0), (0, 1)}


def test_K2_gadget():
    A, b, X = stable_set_instance(2, [(0, 1)])
    g = build_gadget(slack_embedding(A, b, X))
    assert g.lattice.rank <= 2 + 1
    rep = verify_gadget(g)
    assert rep.ok, rep.witnesses
    assert rep.closest == 4 and rep.face_vertices == 3
    d2, ref = brute_closest_ambient(g)
    assert d2 == 3
    c = g.lattice.coefficients(g.p)
    _, cl = closest_vectors(g.lattice, c)
    assert {g.lattice.embed(z) for z in cl} == ref


def test_single_point_instance():
    # x = 0 is forced by x <= 0 (slack 0) together with -x <= 0
    g = build_gadget(slack_embedding([(1,), (-1,)], [0, 0]))
    assert g.X == ((0,),)
    rep = verify_gadget(g)
    assert rep.ok and rep.face_vertices == 1
    # H = {x0} itself has dimension 0
    r = build_gadget(raw_gadget([], (1, 0, 1)))
    assert r.lattice.rank <= 1
    rep = verify_gadget(r)
    assert rep.ok and rep.face_vertices == 1


def test_empty_system_k1():
    g = build_gadget(slack_embedding((), (), k=1))
    assert g.lattice.rank <= 2
    rep = verify_gadget(g)
    assert rep.ok and rep.face_vertices == 2
    d2, ref = brute_closest_ambient(g)
    assert d2 == 1 and len(ref) == 3


def test_path_P3():
    A, b, X = stable_set_instance(3, [(0, 1), (1, 2)])
    assert set(X) == {(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1)}
    rep = verify_gadget(build_gadget(slack_embedding(A, b, X)))
    assert rep.ok and rep.face_vertices == 5


@pytest.mark.parametrize("n,edges,count", [
    (3, [(0, 1), (1, 2), (0, 2)], 4),
    (3, [], 8),
    (5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 11),
])
def test_stable_set_counts(n, edges, count):
    A, b, X = stable_set_instance(n, edges)
    assert len(X) == count
    g = build_gadget(slack_embedding(A, b, X))
    rep = verify_gadget(g)
    assert rep.ok and rep.face_vertices == count
    assert g.lattice.rank <= n + 1


def test_invalid_edges():
    with pytest.raises(ValueError):
        stable_set_instance(2, [(0, 0)])
    with pytest.raises(ValueError):
        stable_set_instance(2, [(0, 2)])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_correlation(n):
    A, b, X = correlation_instance(n)
    assert len(X) == 2 ** n
    assert set(X) == {tuple(xi * xj for xi in x for xj in x)
                      for x in itertools.product((0, 1), repeat=n)}
    for Y in X:
        s = ex.vsub(b, ex.matvec(A, Y)) if A else ()
        assert all(t in (0, 1) for t in s)
    g = build_gadget(slack_embedding(A, b, X))
    assert g.lattice.rank <= n * n + 1
    rep = verify_gadget(g)
    assert rep.ok and rep.face_vertices == 2 ** n


def test_lattice_does_not_depend_on_h():
    A, b, X = stable_set_instance(3, [(0, 1), (1, 2)])
    g = slack_embedding(A, b, X)
    base = build_gadget(g).lattice
    for y in g.Xprime:
        assert same_lattice(build_gadget(g, y).lattice, base)


def test_raw_gadget_matches_the_slack_pipeline():
    A, b, X = stable_set_instance(2, [(0, 1)])
    g = slack_embedding(A, b, X)
    dirs = [ex.vsub(y, g.h) for y in g.Xprime[1:]]
    r = raw_gadget(dirs, g.h)
    assert r.alpha_sq == 3 and set(r.X) == set(g.Xprime)
    assert verify_gadget(r).ok
    assert same_lattice(build_gadget(r).lattice, build_gadget(g).lattice)


def test_raw_gadget_rejects_unequal_norms():
    with pytest.raises(ValueError):
        raw_gadget([(1, 0)], (0, 0))


def test_equal_norm_lattice_point_p():
    L, p = equal_norm_lattice([(1, -1)], (1, 0), 1)
    assert p == (0, 0, -1)
    assert L.ambient_norm2(p) == 1
    with pytest.raises(ValueError):
        equal_norm_lattice([], (1,), 0)


@pytest.mark.parametrize("index", range(6))
def test_perturbed_h_is_detected(index):
    A, b, X = stable_set_instance(2, [(0, 1)])
    g = slack_embedding(A, b, X)
    bad = build_gadget(g, perturbed_h(g, index))
    rep = verify_gadget(bad)
    assert not rep.ok and not rep.checks["closest"]
    assert rep.witnesses
