import numpy as np
import pytest

from etcensus import kernels
from etcensus.graph import canonical_form, classify
from etcensus.oracle import (connected_graph_rows, edge_transitive_by_exhaustion,
                             exhaustive_connected_graphs, oracle_census, orderly_graphs)
from etcensus.census import tabulate

import oracles

COUNTS = oracles.connected_graph_counts(9)


@pytest.mark.parametrize("n", range(1, 10))
def test_connected_counts(n):
    assert len(connected_graph_rows(n)) == COUNTS[n - 1]


def test_known_counts_regression():
    assert COUNTS == [1, 1, 2, 6, 21, 112, 853, 11117, 261080]


@pytest.mark.parametrize("n", range(1, 9))
def test_two_generators_agree(n):
    a = {canonical_form(X) for X in exhaustive_connected_graphs(n)}
    b = {canonical_form(X) for X in orderly_graphs(n)}
    assert len(a) == COUNTS[n - 1]
    assert a == b


@pytest.mark.parametrize("n", range(1, 9))
def test_orderly_counts_all_graphs(n):
    assert len(orderly_graphs(n, connected_only=False)) == oracles.graph_count(n)


def test_four_vertices_brute_force():
    seen = set()
    for edges in oracles.all_labelled_graphs(4):
        if oracles.is_connected(edges, 4):
            seen.add(oracles.brute_canonical(edges, 4))
    assert len(seen) == 6 == len(exhaustive_connected_graphs(4))


def test_prefilter_keeps_every_edge_transitive_graph():
    for X in orderly_graphs(7):
        if classify(X).edge_transitive:
            rows = [int(r) for r in X.rows]
            assert kernels.may_be_edge_transitive(7, np.array(rows, dtype=np.int64))


@pytest.mark.parametrize("n", range(1, 8))
def test_exhaustive_et_set_matches_full_scan(n):
    full = {canonical_form(X) for X in exhaustive_connected_graphs(n)
            if classify(X).edge_transitive}
    assert {canonical_form(X) for X in edge_transitive_by_exhaustion(n)} == full


def test_rows():
    assert tabulate({2: oracle_census(2)}).row(2).tot == 1
    assert tabulate({9: oracle_census(9)}).row(9).as_tuple() == (9, 4, 5, 4, 4, 3)


def test_caps():
    with pytest.raises(ValueError):
        exhaustive_connected_graphs(10)
    with pytest.raises(ValueError):
        orderly_graphs(9)
    with pytest.raises(ValueError):
        exhaustive_connected_graphs(11, allow_long=True)
