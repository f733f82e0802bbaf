import math
from fractions import Fraction

import pytest

from etcensus.constructions import (FiniteField, construction_report, folkman_base,
                                    folkman_blowup, levi_and_complement, symplectic_gq,
                                    valency_part_ratio, wreath_generators)
from etcensus.graph import automorphism_group, classify, is_worthy, twin_classes, vertex_orbits

import oracles


def test_base_graph_k3():
    X = folkman_base(3)
    assert X.n == 15
    assert X.num_edges() == 36
    degs = X.degrees()
    assert set(degs[:6]) == {6} and set(degs[6:]) == {4}


@pytest.mark.parametrize("k", [3, 4, 5])
def test_base_graph_formulas(k):
    X = folkman_base(k)
    assert X.n == 2 * k + k * k
    assert X.num_edges() == 2 * k * k * (k - 1)
    assert set(X.degrees()[:2 * k]) == {k * (k - 1)}
    assert set(X.degrees()[2 * k:]) == {2 * (k - 1)}
    assert is_worthy(X)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_blowup_is_semi_symmetric(k):
    X, Y = folkman_blowup(k)
    f = classify(Y)
    assert Y.n == 4 * k * k
    assert set(Y.degrees()) == {2 * k * (k - 1)}
    assert f.edge_transitive and not f.vertex_transitive and f.semi_symmetric
    assert not f.worthy
    assert valency_part_ratio(Y) == Fraction(k - 1, k)
    sizes = {}
    first_b = 2 * k * k
    for c in twin_classes(Y):
        sizes.setdefault(c[0] >= first_b, set()).add(len(c))
    assert sizes == {False: {k}, True: {2}}
    # twin sizes differ, and Aut(Y) has two vertex orbits
    assert len(vertex_orbits(Y)) == 2


@pytest.mark.parametrize("k", [3, 4])
def test_wreath_symmetry(k):
    X = folkman_base(k)
    gens = [g.images for g in wreath_generators(k)]
    orbit = oracles.edge_orbit(gens, X.edges(), X.edges()[0])
    assert len(orbit) == X.num_edges()
    assert len(oracles.closure(gens, X.n)) == 2 * math.factorial(k) ** 2


@pytest.mark.parametrize("k,order", [(3, 72), (4, 1152)])
def test_base_automorphism_group(k, order):
    assert automorphism_group(folkman_base(k).without_bipartition()).order() == order


def test_k_below_three_rejected():
    with pytest.raises(ValueError):
        folkman_blowup(2)
    with pytest.raises(ValueError):
        wreath_generators(1)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_field_axioms(q):
    F = FiniteField(q)
    for x in range(1, q):
        assert F.mul(x, int(F.inv[x])) == 1
        assert F.add(x, int(F.neg[x])) == 0
    for x in range(q):
        for y in range(q):
            for z in range(q):
                assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))


@pytest.mark.parametrize("q,points,per_point", [(3, 40, 4), (5, 156, 6), (7, 400, 8),
                                                (9, 820, 10)])
def test_quadrangle_counts(q, points, per_point):
    gq = symplectic_gq(q)
    assert len(gq.points) == len(gq.lines) == points
    assert {len(t) for t in gq.lines_through()} == {per_point}
    assert {len(L) for L in gq.lines} == {per_point}


@pytest.mark.parametrize("q", [3, 5])
def test_lines_match_subspace_sweep(q):
    gq = symplectic_gq(q)
    ours = {frozenset(gq.points[p] for p in L) for L in gq.lines}
    brute = oracles.isotropic_lines_prime_field(q)
    assert len(brute) == q ** 3 + q ** 2 + q + 1
    # each brute-force line is represented by its normalised vectors
    assert {frozenset(v for v in L if v[next(i for i, c in enumerate(v) if c)] == 1)
            for L in brute} == ours


def test_points_are_normalised_and_sorted():
    gq = symplectic_gq(3)
    assert gq.points == sorted(gq.points)
    assert all(p[next(i for i, c in enumerate(p) if c)] == 1 for p in gq.points)
    assert gq.form_is_alternating_nondegenerate()


@pytest.mark.parametrize("q", [2, 4, 8, 11, 25])
def test_unsupported_q(q):
    with pytest.raises(ValueError):
        symplectic_gq(q)


@pytest.fixture(scope="module")
def gq3_graphs():
    return levi_and_complement(symplectic_gq(3))


def test_levi_graph_q3(gq3_graphs):
    levi, _ = gq3_graphs
    f = classify(levi)
    assert levi.n == 80 and levi.num_edges() == 160
    assert set(levi.degrees()) == {4}
    assert f.edge_transitive and not f.vertex_transitive and f.bipartite


def test_complement_q3(gq3_graphs):
    _, comp = gq3_graphs
    f = classify(comp)
    assert comp.n == 80 and set(comp.degrees()) == {36}
    assert f.semi_symmetric and f.worthy
    assert valency_part_ratio(comp) == Fraction(36, 40)


def test_automorphism_orders_q3(gq3_graphs):
    levi, comp = gq3_graphs
    A = automorphism_group(levi)
    B = automorphism_group(comp)
    assert A.order() == B.order() == 51840
    # independent closure of the returned generators
    assert len(oracles.closure([g.images for g in A.generators], 80)) == 51840
    for g in A.generators:
        assert oracles.edge_orbit([g.images], levi.edges(), levi.edges()[0])


def test_locally_arc_transitive_levi(gq3_graphs):
    levi, _ = gq3_graphs
    A = automorphism_group(levi)
    for v in (0, 40):
        Av = A.stabilizer(v)
        nbrs = set(levi.neighbours(v))
        assert set(Av.orbit(min(nbrs))) == nbrs


def test_report():
    rep = construction_report(folkman_blowup(3)[1])
    assert rep["order"] == 36 and rep["valency"] == 12 and rep["semisym"]
    assert rep["valency_part_ratio"] == Fraction(2, 3)
