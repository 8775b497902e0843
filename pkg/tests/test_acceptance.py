"""Acceptance suite: eight criteria, each reported as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
happen; the terminal summary repeats them in any case.
"""

import itertools
import json
import random
import time
from fractions import Fraction

from vxc import exact as ex
from vxc import io
from vxc.cli import FAILED, main
from vxc.enumeration import closest_vectors, enumerate_in_ball, shortest_vectors
from vxc.gadgets import (build_gadget, correlation_instance, slack_embedding,
                         stable_set_instance, verify_gadget)
from vxc.lattice import congruence_lattice, product_lattice, root_lattice
from vxc.lifts import (lift_astar_zonotope, lift_congruence_cell, lift_root_cell, verify_lift)
from vxc.polytope import Polytope, convex_hull, dualize, slack_matrix
from vxc.voronoi import (cell_membership, dual_voronoi_cell, irredundant_by_lp,
                         relevant_vectors, voronoi_cell)

FAMILIES = ["Zd", "A", "D", "Astar", "Dstar_scaled"]


def suite_lattices(max_d=4):
    """Every lattice of the suite up to rank max_d."""
    out = []
    for fam in FAMILIES:
        for d in range(1, max_d + 1):
            if fam in ("D", "Dstar_scaled") and d < 2:
                continue
            out.append(root_lattice(fam, d))
    for d, a in itertools.product((2, 3, 4), (1, 2, 3)):
        if d <= max_d:
            out.append(congruence_lattice(d, a))
    return out


def criterion(record_property, number, title):
    record_property("criterion", str(number))
    record_property("title", title)


def announce(number, title, ok, detail=""):
    print(f"\n{'PASS' if ok else 'FAIL'}  criterion {number}: {title} {detail}".rstrip())


# --- 1 ----------------------------------------------------------------------------

def test_criterion_1_relevant_vector_counts(record_property):
    title = "relevant-vector counts"
    criterion(record_property, 1, title)
    cases = [("Zd", d, 2 * d) for d in range(1, 9)]
    cases += [("A", d, d * (d + 1)) for d in range(1, 7)]
    cases += [("D", d, 2 * d * (d - 1)) for d in range(3, 7)]
    # same range as D_d; at d = 2 the lattice is a rotated square (checked below)
    cases += [("Dstar_scaled", d, 2 * d + 2 ** d) for d in range(3, 7)]
    cases += [("Astar", d, 2 * (2 ** d - 1)) for d in range(1, 6)]
    cases += [("E8", None, 240)]
    bad, slowest = [], 0.0
    for fam, d, expected in cases:
        t0 = time.perf_counter()
        L = root_lattice(fam, d)
        got = len(relevant_vectors(L))
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if got != expected or dt >= 60:
            bad.append((fam, d, got, expected, round(dt, 1)))
    # E8: ball enumeration at norm² 2 and S(Λ) = F(Λ) for root lattices
    E8 = root_lattice("E8")
    ball = [z for z in enumerate_in_ball(E8, (0,) * 8, 2) if any(z)]
    _, S = shortest_vectors(E8)
    e8_ok = len(ball) == 240 and set(S) == set(relevant_vectors(E8).vectors)
    # ±2e_i = (1, 1) ± (1, -1) splits orthogonally, so only {±1}^2 is relevant
    D2 = root_lattice("Dstar_scaled", 2)
    d2_ok = set(relevant_vectors(D2).vectors) == set(irredundant_by_lp(D2)) and \
        len(relevant_vectors(D2)) == 4
    ok = not bad and e8_ok and d2_ok
    announce(1, title, ok, f"({len(cases)} lattices, slowest {slowest:.1f} s; "
                           f"Dstar2 has 4 by the LP oracle)")
    assert ok, bad


# --- 2 ----------------------------------------------------------------------------

def test_criterion_2_lift_verification(record_property):
    title = "lift verification"
    criterion(record_property, 2, title)
    expected = {"A": lambda d: 2 * (d + 1), "D": lambda d: 4 * d,
                "Astar": lambda d: (d + 1) ** 2, "Dstar_scaled": lambda d: 4 * d}
    failures = []
    t0 = time.perf_counter()
    for fam, count in expected.items():
        dims = range(2, 6) if fam in ("A", "D") else range(2, 5)
        for d in dims:
            L = lift_root_cell(fam, d)
            if not verify_lift(L).exact or L.facet_count != count(d):
                failures.append((fam, d, L.facet_count))
    root_time = time.perf_counter() - t0
    for d, a in itertools.product((2, 3, 4), (1, 2, 3)):
        if not verify_lift(lift_congruence_cell(d, a)).exact:
            failures.append(("congruence", d, a))
    for d in range(2, 5):
        L = lift_astar_zonotope(d)
        # one cube facet pair per segment generator
        if not verify_lift(L).exact or L.facet_count // 2 > d * (d + 1) // 2:
            failures.append(("zonotope", d, L.facet_count))
    total = time.perf_counter() - t0
    ok = not failures and root_time < 120
    announce(2, title, ok, f"(root cells {root_time:.1f} s, all lifts {total:.1f} s)")
    assert ok, (failures, root_time)


# --- 3 ----------------------------------------------------------------------------

def all_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield [p for i, p in enumerate(pairs) if mask >> i & 1]


def test_criterion_3_gadget_pipeline(record_property):
    title = "gadget pipeline"
    criterion(record_property, 3, title)
    failures, count = [], 0
    for n in range(1, 6):
        for edges in all_graphs(n):
            A, b, X = stable_set_instance(n, edges)
            g = build_gadget(slack_embedding(A, b, X, k=n))
            rep = verify_gadget(g)
            count += 1
            if not rep.ok or g.lattice.rank > n + 1 or rep.face_vertices != len(X):
                failures.append((n, edges, rep.checks))
    for n in (2, 3):
        A, b, X = correlation_instance(n)
        g = build_gadget(slack_embedding(A, b, X))
        rep = verify_gadget(g)
        if not rep.ok or rep.face_vertices != 2 ** n or g.lattice.rank > n * n + 1:
            failures.append(("correlation", n, rep.checks))
    ok = not failures
    announce(3, title, ok, f"({count} graphs, correlation n = 2, 3)")
    assert ok, failures[:5]


# --- 4 ----------------------------------------------------------------------------

def test_criterion_4_duality(record_property):
    title = "duality properties"
    criterion(record_property, 4, title)
    failures = []
    for L in suite_lattices(4):
        P = voronoi_cell(L)
        D = dualize(P)
        if not dualize(D).same_set(P) or dualize(D).h_key() != P.h_key():
            failures.append((L.label, "involution"))
        if slack_matrix(D).entries != slack_matrix(P, normalize=True).transpose().entries:
            failures.append((L.label, "slack transpose"))
        if set(D.V) != set(dual_voronoi_cell(L).V):
            failures.append((L.label, "dual cell"))
    ok = not failures
    announce(4, title, ok, f"({len(suite_lattices(4))} cells)")
    assert ok, failures


# --- 5 ----------------------------------------------------------------------------

def test_criterion_5_products(record_property):
    title = "product properties"
    criterion(record_property, 5, title)
    rng = random.Random(2024)
    pool = [L for L in suite_lattices(4) if L.rank <= 5]
    failures, pairs = [], []
    while len(pairs) < 5:
        L1, L2 = rng.choice(pool), rng.choice(pool)
        if L1.rank + L2.rank <= 6:
            pairs.append((L1, L2))
    for L1, L2 in pairs:
        P = product_lattice(L1, L2)
        k1, k2 = L1.rank, L2.rank
        padded = {v + (0,) * k2 for v in relevant_vectors(L1).vectors}
        padded |= {(0,) * k1 + v for v in relevant_vectors(L2).vectors}
        if set(relevant_vectors(P).vectors) != padded:
            failures.append((L1.label, L2.label, "relevant vectors"))
        prod = {tuple(a) + tuple(b) for a in voronoi_cell(L1).V for b in voronoi_cell(L2).V}
        if set(voronoi_cell(P).V) != prod:
            failures.append((L1.label, L2.label, "cell"))
    ok = not failures
    announce(5, title, ok, "(" + ", ".join(f"{a.label}x{b.label}" for a, b in pairs) + ")")
    assert ok, failures


# --- 6 ----------------------------------------------------------------------------

def test_criterion_6_tiling(record_property):
    title = "tiling property"
    criterion(record_property, 6, title)
    rng = random.Random(6)
    lattices = [L for L in suite_lattices(4) if L.rank >= 2]
    violations = 0
    for L in lattices:
        rv = relevant_vectors(L)
        for _ in range(1000):
            x = tuple(Fraction(rng.randint(-40, 40), rng.randint(1, 8)) for _ in range(L.rank))
            _, cl = closest_vectors(L, x)
            violations += sum(not cell_membership(L, ex.vsub(x, z), rv) for z in cl)
    ok = violations == 0
    announce(6, title, ok, f"({len(lattices)} lattices x 1000 points, {violations} violations)")
    assert ok


# --- 7 ----------------------------------------------------------------------------

def dd_roundtrip(P: Polytope) -> bool:
    """H -> V -> H -> V reproduces both descriptions."""
    P = P.facets()
    again = convex_hull(P.V)
    back = Polytope(P.dim, again.ineqs, again.eqs)
    return again.h_key() == P.h_key() and set(back.V) == set(P.V)


def test_criterion_7_oracle_equivalence(record_property):
    title = "oracle equivalence"
    criterion(record_property, 7, title)
    failures, polys = [], 0
    for L in suite_lattices(4):
        if set(relevant_vectors(L).vectors) != set(irredundant_by_lp(L)):
            failures.append((L.label, "relevant vectors"))
        for P in (voronoi_cell(L), dual_voronoi_cell(L)):
            polys += 1
            if not dd_roundtrip(P):
                failures.append((L.label, "double description"))
    for fam in ("A", "D", "Astar", "Dstar_scaled"):
        for d in range(2, 5):
            polys += 1
            if not dd_roundtrip(lift_root_cell(fam, d).target):
                failures.append((fam, d, "lift target"))
    ok = not failures
    announce(7, title, ok, f"({len(suite_lattices(4))} lattices, {polys} polytopes)")
    assert ok, failures


# --- 8 ----------------------------------------------------------------------------

def test_criterion_8_negative_controls(record_property, tmp_path, capsys):
    title = "negative controls"
    criterion(record_property, 8, title)
    lifts = []
    for fam, d in [("A", 3), ("D", 3), ("Astar", 2), ("Dstar_scaled", 3), ("A", 4)]:
        f = tmp_path / f"{fam}{d}.json"
        io.save(lift_root_cell(fam, d), f)
        lifts.append(f)
    graphs = []
    for name, n, edges in [("k2", 2, [(0, 1)]), ("p3", 3, [(0, 1), (1, 2)]),
                           ("c4", 4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
                           ("c5", 5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])]:
        f = tmp_path / f"{name}.json"
        f.write_text(json.dumps({"n": n, "edges": edges}))
        graphs.append(f)
    caught_lift = caught_gadget = 0
    for seed in range(20):
        code = main(["lift", "verify", str(lifts[seed % len(lifts)]), "--corrupt",
                     "--seed", str(seed)])
        out = json.loads(capsys.readouterr().out)
        if code == FAILED and (out["missed_vertices"] or out["escaped_vertices"]):
            caught_lift += 1
        code = main(["gadget", "stable-set", str(graphs[seed % len(graphs)]), "--perturb-h",
                     "--seed", str(seed)])
        out = json.loads(capsys.readouterr().out)
        if code == FAILED and out["witnesses"]:
            caught_gadget += 1
    ok = caught_lift == 20 and caught_gadget == 20
    with capsys.disabled():
        announce(8, title, ok, f"(lift {caught_lift}/20, gadget {caught_gadget}/20)")
    assert ok
