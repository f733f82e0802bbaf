import itertools
import math
import random

import pytest

from etcensus.perm import compose
from etcensus.permgroup import (PermGroup, alternating_group, core, coset_action,
                                corefree_subgroups_of_index, cyclic_group, dihedral_group,
                                symmetric_group)

import oracles


def random_groups(count, seed=1):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, 8)
        gens = []
        for _ in range(rng.randint(1, 3)):
            p = list(range(n))
            # short random products keep many of the groups small
            k = rng.randint(2, n)
            pts = rng.sample(range(n), k)
            for a, b in zip(pts, pts[1:]):
                p[a], p[b] = p[b], p[a]
            gens.append(tuple(p))
        out.append(PermGroup(n, gens))
    return out


CORPUS = random_groups(60) + [symmetric_group(6), alternating_group(7), dihedral_group(9),
                              cyclic_group(8)]


@pytest.mark.parametrize("G", CORPUS, ids=lambda G: f"deg{G.degree}")
def test_orbit_stabilizer(G):
    for pt in range(G.degree):
        assert len(G.orbit(pt)) * G.stabilizer(pt).order() == G.order()


@pytest.mark.parametrize("G", [G for G in CORPUS if G.order() <= 10 ** 4],
                         ids=lambda G: f"deg{G.degree}")
def test_chain_order_matches_closure(G):
    assert G.order() == len(oracles.closure([g.images for g in G.generators], G.degree))


def test_known_orders():
    assert symmetric_group(8).order() == 40320
    assert alternating_group(8).order() == 20160
    assert dihedral_group(10).order() == 20


def test_membership_agrees_with_closure():
    G = PermGroup(6, [(1, 0, 2, 3, 4, 5), (0, 1, 3, 4, 5, 2)])
    elems = oracles.closure([g.images for g in G.generators], 6)
    for p in itertools.permutations(range(6)):
        assert G.contains(p) == (p in elems)


def test_elements_array_lists_group():
    G = dihedral_group(7)
    rows = {tuple(int(x) for x in r) for r in G.elements_array()}
    assert rows == set(oracles.closure([g.images for g in G.generators], 7))


def test_structure():
    assert symmetric_group(5).derived_subgroup().order() == 60
    assert alternating_group(5).is_perfect()
    assert symmetric_group(4).is_soluble()
    assert not symmetric_group(5).is_soluble()


def test_coset_action_of_point_stabiliser_is_natural():
    G = symmetric_group(5)
    act = coset_action(G, G.stabilizer(0))
    assert act.degree == 5
    assert act.image_group().order() == 120
    assert act.is_faithful()


def test_coset_action_kernel_is_core():
    G = symmetric_group(4)
    V = PermGroup(4, [(1, 0, 3, 2), (2, 3, 0, 1)])
    H = PermGroup(4, [(1, 0, 3, 2), (2, 3, 0, 1), (1, 0, 2, 3)])
    act = coset_action(G, H)
    assert act.degree == 3
    assert act.kernel().equals(V)
    assert core(G, H).equals(V)


def test_corefree_subgroups_give_faithful_actions():
    G = symmetric_group(4)
    for m in (4, 6, 8, 12, 24):
        for H in corefree_subgroups_of_index(G, m):
            assert G.order() // H.order() == m
            assert core(G, H).is_trivial()
            assert coset_action(G, H).is_faithful()
    assert corefree_subgroups_of_index(G, 3) == []
    assert corefree_subgroups_of_index(G, 5) == []


def test_corefree_counts_match_brute_force():
    G = symmetric_group(5)
    elems = list(itertools.permutations(range(5)))
    classes = oracles.subgroup_classes_of_symmetric(5)

    def corefree(S):
        return all(len(S & oracles.conjugate_set(S, x)) >= 1 for x in elems) and \
            len(frozenset.intersection(*[oracles.conjugate_set(S, x) for x in elems])) == 1

    for m in (5, 6, 10, 12, 20, 24, 30, 40, 60, 120):
        want = sum(1 for S in classes if len(S) * m == 120 and corefree(S))
        assert len(corefree_subgroups_of_index(G, m)) == want, m


def test_rejects_bad_index():
    with pytest.raises(ValueError):
        corefree_subgroups_of_index(symmetric_group(3), 0)
