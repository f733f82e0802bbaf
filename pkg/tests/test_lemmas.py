"""Structural facts about bipartite edge-transitive graphs, checked on the census."""

import pytest

from etcensus.graph import (automorphism_group, blow_up, canonical_form, classify,
                            part_preserving_subgroup, parts_of, twin_classes, twin_quotient)
from etcensus.permgroup import PermGroup


def all_records(bipartite_upto16):
    by_n, _ = bipartite_upto16
    return [r for n in sorted(by_n) for r in by_n[n]]


def test_census_is_nonempty(bipartite_upto16):
    assert len(all_records(bipartite_upto16)) > 100


def test_quotient_round_trip(bipartite_upto16, worthy_cache):
    worthy_forms = {r.canonical for recs in worthy_cache.values() for r in recs}
    for r in all_records(bipartite_upto16):
        X = r.graph.without_bipartition()
        U, W = parts_of(X)
        X = X.with_bipartition(U, W)
        Q = twin_quotient(X)
        fq = classify(Q)
        assert fq.worthy and fq.edge_transitive and fq.connected
        sizes = {v: len(c) for c in twin_classes(X) for v in c}
        a = {sizes[v] for v in U}
        b = {sizes[v] for v in W}
        assert len(a) == len(b) == 1
        Z = blow_up(Q, a.pop(), b.pop())
        assert canonical_form(Z) == canonical_form(X.without_bipartition())
        assert canonical_form(Q.with_bipartition(*Q.bipartition)) in worthy_forms or \
            canonical_form(Q.with_bipartition(Q.bipartition[1], Q.bipartition[0])) in worthy_forms


def _restricted_order(G: PermGroup, part) -> int:
    pos = {v: i for i, v in enumerate(part)}
    gens = [tuple(pos[g[v]] for v in part) for g in G.generators]
    return PermGroup(len(part), gens).order()


def test_worthy_graphs_act_faithfully_on_parts(bipartite_upto16):
    for r in all_records(bipartite_upto16):
        if not r.flags.worthy or r.graph.n < 3:
            continue
        X = r.graph.without_bipartition()
        G = part_preserving_subgroup(X)
        for part in parts_of(X):
            assert _restricted_order(G, part) == G.order()


def test_edge_but_not_vertex_transitive_means_bipartite(catalogue):
    from etcensus.oracle import edge_transitive_by_exhaustion

    for n in range(1, 10):
        for X in edge_transitive_by_exhaustion(n):
            f = classify(X)
            if not f.vertex_transitive:
                assert f.bipartite


def _edge_orbit_count(G, X):
    edges = {frozenset(e) for e in X.edges()}
    count = 0
    while edges:
        e = edges.pop()
        count += 1
        stack = [e]
        while stack:
            u, v = tuple(stack.pop())
            for g in G.generators:
                f = frozenset((g[u], g[v]))
                if f in edges:
                    edges.remove(f)
                    stack.append(f)
    return count


def test_dichotomy(bipartite_upto16):
    for r in all_records(bipartite_upto16):
        X = r.graph.without_bipartition()
        if X.n < 3:
            continue
        f = classify(X)
        G = part_preserving_subgroup(X)
        U, W = parts_of(X)
        for part in (U, W):
            assert sorted(G.orbit(part[0])) == sorted(part)
        u = U[0]
        w = min(X.neighbours(u))
        Gu, Gw = G.stabilizer(u), G.stabilizer(w)
        local = [len({*Gv.orbit(min(X.neighbours(v)))} & set(X.neighbours(v))) == X.degree(v)
                 for v, Gv in ((u, Gu), (w, Gw))]
        if all(local):
            assert _edge_orbit_count(G, X) == 1
            J = PermGroup(X.n, [g.images for g in Gu.generators] + [g.images for g in Gw.generators])
            assert J.order() == G.order()
        else:
            assert f.half_arc_transitive
            assert _edge_orbit_count(G, X) == 2
            for v in (u, w):
                Gv = G.stabilizer(v)
                lens = sorted(len(o) for o in Gv.orbits() if o[0] in set(X.neighbours(v)))
                assert len(lens) == 2 and lens[0] == lens[1]
