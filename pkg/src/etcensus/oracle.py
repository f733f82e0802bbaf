"""Census of edge-transitive graphs by exhaustive generation.

Connected graphs are generated by canonical augmentation: a vertex is added to
each connected parent, and a child is kept only when the new vertex lies in the
automorphism orbit of a canonically chosen non-cut vertex.  A second generator
(orderly, by maximal adjacency string) is provided for cross-checking at small
orders.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import kernels
from .graph import Graph, canonical_form, classify, is_connected

__all__ = [
    "AUGMENTATION_MAX",
    "LONG_MAX",
    "ORDERLY_MAX",
    "exhaustive_connected_graphs",
    "connected_graph_rows",
    "orderly_graphs",
    "edge_transitive_by_exhaustion",
    "oracle_census",
]

AUGMENTATION_MAX = 9
LONG_MAX = 10
ORDERLY_MAX = 8


def _check_order(n: int, allow_long: bool, cap: int | None = None) -> None:
    if n < 1:
        raise ValueError("order must be positive")
    limit = cap if cap is not None else (LONG_MAX if allow_long else AUGMENTATION_MAX)
    if n > limit:
        raise ValueError(f"order {n} exceeds the limit {limit} for exhaustive generation")


def _augment_chunk(args):
    n, parents, only_et = args
    return kernels.augment_batch(n, parents, only_et)


def _augment(n: int, parents: np.ndarray, only_et: bool, workers: int | None) -> np.ndarray:
    if workers is None or workers <= 1 or len(parents) < 64:
        return kernels.augment_batch(n, parents, only_et)
    chunks = np.array_split(parents, workers * 8)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(_augment_chunk, [(n, c, only_et) for c in chunks if len(c)]))
    return np.concatenate(parts) if parts else np.zeros((0, n + 1), dtype=np.int64)


def connected_graph_rows(n: int, *, allow_long: bool = False, only_et_last: bool = False,
                         workers: int | None = None) -> np.ndarray:
    """Bitset rows of one graph per isomorphism class of connected graphs of order n."""
    _check_order(n, allow_long)
    level = np.zeros((1, 1), dtype=np.int64)
    for j in range(1, n):
        level = _augment(j, level, only_et_last and j == n - 1, workers)
    return level


def _to_graph(rows) -> Graph:
    return Graph.from_rows([int(r) for r in rows])


def exhaustive_connected_graphs(n: int, *, allow_long: bool = False,
                                workers: int | None = None) -> list[Graph]:
    """Connected graphs of order n up to isomorphism."""
    return [_to_graph(r) for r in connected_graph_rows(n, allow_long=allow_long, workers=workers)]


def orderly_graphs(n: int, *, connected_only: bool = True) -> list[Graph]:
    """All graphs of order n (n <= 8) by orderly generation."""
    _check_order(n, False, ORDERLY_MAX)
    out = [_to_graph(r) for r in kernels.orderly_all_graphs(n)]
    return [X for X in out if is_connected(X)] if connected_only else out


def edge_transitive_by_exhaustion(n: int, *, allow_long: bool = False,
                                  workers: int | None = None) -> list[Graph]:
    """Connected edge-transitive graphs of order n found by exhaustive generation.

    Children failing the degree prefilter (at most two degrees, and degree
    classes independent when there are two) are discarded before any
    automorphism computation.
    """
    rows = connected_graph_rows(n, allow_long=allow_long, only_et_last=True, workers=workers)
    out = [_to_graph(r) for r in rows]
    if n <= 2:
        out = [X for X in out if classify(X).edge_transitive]
    return sorted(out, key=lambda X: canonical_form(X).data)


def oracle_census(n: int, *, allow_long: bool = False, workers: int | None = None):
    """Census records of order n computed independently of the group-theoretic pipeline."""
    from .census import CensusRecord

    recs = []
    for X in edge_transitive_by_exhaustion(n, allow_long=allow_long, workers=workers):
        recs.append(CensusRecord(X, canonical_form(X), classify(X), "exhaustive generation"))
    return recs
