"""Simple undirected graphs, canonical forms, automorphisms and symmetry flags.

A :class:`Graph` keeps one Python ``int`` bitset per vertex.  Graphs are
immutable; derived data (automorphism group, canonical labelling) is cached
on the instance.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .permgroup import PermGroup

__all__ = [
    "Graph",
    "CanonicalForm",
    "ClassificationFlags",
    "complete_graph",
    "complete_bipartite_graph",
    "cycle_graph",
    "petersen_graph",
    "is_connected",
    "is_worthy",
    "is_bipartite",
    "two_colouring",
    "valency_check",
    "canonical_form",
    "canonical_labeling",
    "automorphism_group",
    "classify",
    "twin_classes",
    "twin_quotient",
    "blow_up",
    "part_preserving_subgroup",
    "to_graph6",
    "from_graph6",
    "to_edge_list",
    "from_edge_list",
]


class Graph:
    __slots__ = ("n", "rows", "bipartition", "_cache")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (),
                 bipartition: tuple[Iterable[int], Iterable[int]] | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        rows = [0] * n
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for {n} vertices")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        self.n = n
        self.rows = tuple(rows)
        self._cache = {}
        self.bipartition = None
        if bipartition is not None:
            self.bipartition = self._check_parts(bipartition)

    @classmethod
    def from_rows(cls, rows: Sequence[int], bipartition=None) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(rows)
        g.rows = tuple(int(r) for r in rows)
        g._cache = {}
        for v, r in enumerate(g.rows):
            if r >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            if r >> g.n:
                raise ValueError("neighbour out of range")
        for u in range(g.n):
            r = g.rows[u]
            while r:
                low = r & -r
                v = low.bit_length() - 1
                if not g.rows[v] >> u & 1:
                    raise ValueError("adjacency is not symmetric")
                r ^= low
        g.bipartition = None
        if bipartition is not None:
            g.bipartition = g._check_parts(bipartition)
        return g

    @classmethod
    def from_adjacency(cls, A, bipartition=None) -> "Graph":
        A = np.asarray(A)
        n = A.shape[0]
        rows = []
        for i in range(n):
            r = 0
            for j in np.nonzero(A[i])[0]:
                r |= 1 << int(j)
            rows.append(r)
        return cls.from_rows(rows, bipartition)

    def _check_parts(self, parts):
        U = frozenset(int(x) for x in parts[0])
        W = frozenset(int(x) for x in parts[1])
        if U & W or len(U) + len(W) != self.n or (U | W) != frozenset(range(self.n)):
            raise ValueError("parts must partition the vertex set")
        for part in (U, W):
            mask = sum(1 << v for v in part)
            if any(self.rows[v] & mask for v in part):
                raise ValueError("edge inside a part")
        return (tuple(sorted(U)), tuple(sorted(W)))

    def with_bipartition(self, U: Iterable[int], W: Iterable[int]) -> "Graph":
        return Graph.from_rows(self.rows, (U, W))

    def without_bipartition(self) -> "Graph":
        return Graph.from_rows(self.rows)

    # -- queries ----------------------------------------------------------------

    def neighbours(self, v: int) -> list[int]:
        r = self.rows[v]
        out = []
        while r:
            low = r & -r
            out.append(low.bit_length() - 1)
            r ^= low
        return out

    def degree(self, v: int) -> int:
        return bin(self.rows[v]).count("1")

    def degrees(self) -> list[int]:
        return [bin(r).count("1") for r in self.rows]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.neighbours(u) if u < v]

    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def adjacency_matrix(self) -> np.ndarray:
        if "adj" not in self._cache:
            A = np.zeros((self.n, self.n), dtype=np.uint8)
            for u in range(self.n):
                nb = self.neighbours(u)
                if nb:
                    A[u, nb] = 1
            self._cache["adj"] = A
        return self._cache["adj"]

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        if "csr" not in self._cache:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            idx = []
            for u in range(self.n):
                idx.extend(self.neighbours(u))
                indptr[u + 1] = len(idx)
            self._cache["csr"] = (indptr, np.array(idx, dtype=np.int64))
        return self._cache["csr"]

    def relabel(self, sigma: Sequence[int]) -> "Graph":
        """The graph with vertex v renamed ``sigma[v]``."""
        sigma = list(sigma)
        if sorted(sigma) != list(range(self.n)):
            raise ValueError("relabelling must be a permutation")
        edges = [(sigma[u], sigma[v]) for u, v in self.edges()]
        parts = None
        if self.bipartition is not None:
            parts = tuple([sigma[x] for x in p] for p in self.bipartition)
        return Graph(self.n, edges, parts)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        vertices = list(vertices)
        pos = {v: i for i, v in enumerate(vertices)}
        edges = [(pos[u], pos[v]) for u, v in self.edges() if u in pos and v in pos]
        return Graph(len(vertices), edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.rows == other.rows and self.bipartition == other.bipartition

    def __hash__(self) -> int:
        return hash((self.rows, self.bipartition))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges()})"


# -- small families ---------------------------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite_graph(k: int, m: int) -> Graph:
    return Graph(k + m, [(i, k + j) for i in range(k) for j in range(m)],
                 (range(k), range(k, k + m)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


# -- elementary properties -----------------------------------------------------------


def is_connected(X: Graph) -> bool:
    if X.n <= 1:
        return True
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= X.rows[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << X.n) - 1


def is_worthy(X: Graph) -> bool:
    """No two distinct vertices have the same neighbourhood."""
    return len(set(X.rows)) == X.n


def two_colouring(X: Graph) -> list[int] | None:
    colour = [-1] * X.n
    for s in range(X.n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in X.neighbours(u):
                if colour[v] < 0:
                    colour[v] = 1 - colour[u]
                    stack.append(v)
                elif colour[v] == colour[u]:
                    return None
    return colour


def is_bipartite(X: Graph) -> bool:
    """Two-colourable with at least one edge."""
    return X.num_edges() > 0 and two_colouring(X) is not None


def valency_check(X: Graph) -> Counter:
    return Counter(X.degrees())


# -- canonical labelling ------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    data: bytes

    def hex(self) -> str:
        return self.data.hex()

    def __lt__(self, other: "CanonicalForm") -> bool:
        return self.data < other.data


def _colours(X: Graph, respect_bipartition: bool) -> np.ndarray:
    col = np.zeros(X.n, dtype=np.int64)
    if respect_bipartition and X.bipartition is not None:
        col[list(X.bipartition[1])] = 1
    return col


def _search(X: Graph, respect_bipartition: bool):
    key = ("search", respect_bipartition and X.bipartition is not None)
    if key not in X._cache:
        col = _colours(X, key[1])
        if X.n == 0:
            res = (np.zeros(0, np.int64), np.zeros((0, 0), np.int64), 0,
                   np.zeros(0, np.int64), 0, np.zeros(0, np.int64))
        else:
            indptr, idx = X.csr()
            res = kernels.canonical_search(X.n, indptr, idx, X.adjacency_matrix(), col)
        X._cache[key] = (res, col)
    return X._cache[key]


def canonical_labeling(X: Graph, respect_bipartition: bool = False) -> list[int]:
    """``lab`` with ``lab[i]`` the vertex placed at canonical position i."""
    (lab, *_), _ = _search(X, respect_bipartition)
    return [int(v) for v in lab]


def canonical_form(X: Graph, respect_bipartition: bool = False) -> CanonicalForm:
    (lab, *_), col = _search(X, respect_bipartition)
    n = X.n
    header = n.to_bytes(4, "big")
    if respect_bipartition and X.bipartition is not None:
        sizes = np.bincount(col, minlength=2)
        header += b"P" + b"".join(int(s).to_bytes(4, "big") for s in sizes)
    if n < 2:
        return CanonicalForm(header)
    A = X.adjacency_matrix()[np.ix_(lab, lab)]
    iu = np.triu_indices(n, 1)
    # column order: (0,1), (0,2), (1,2), (0,3), ...
    order = np.lexsort((iu[0], iu[1]))
    bits = A[iu[0][order], iu[1][order]]
    return CanonicalForm(header + np.packbits(bits).tobytes())


def canonical_graph(X: Graph) -> Graph:
    lab = canonical_labeling(X)
    sigma = [0] * X.n
    for i, v in enumerate(lab):
        sigma[v] = i
    return X.without_bipartition().relabel(sigma) if X.bipartition else X.relabel(sigma)


def automorphism_group(X: Graph, respect_bipartition: bool = False) -> PermGroup:
    """Automorphisms of X (colour-preserving when ``respect_bipartition``)."""
    key = ("aut", respect_bipartition and X.bipartition is not None)
    if key not in X._cache:
        (lab, gens, ngens, base, nbase, sizes), _ = _search(X, respect_bipartition)
        order = math.prod(int(s) for s in sizes[:nbase])
        n = max(X.n, 1)
        G = PermGroup(n, [tuple(int(x) for x in g) for g in gens[:ngens]], order=order)
        X._cache[key] = G
    return X._cache[key]


def _gen_array(G: PermGroup) -> np.ndarray:
    gens = [g.images for g in G.generators]
    if not gens:
        return np.zeros((0, G.degree), dtype=np.int64)
    return np.array(gens, dtype=np.int64)


def _orbit_count(num: int, src: list, dst: list) -> int:
    if num == 0:
        return 0
    s = np.concatenate(src) if src else np.zeros(0, dtype=np.int64)
    d = np.concatenate(dst) if dst else np.zeros(0, dtype=np.int64)
    mat = coo_matrix((np.ones(len(s), dtype=np.int8), (s, d)), shape=(num, num))
    k, _ = connected_components(mat, directed=True, connection="weak")
    return int(k)


def vertex_orbits(X: Graph, G: PermGroup | None = None) -> list[list[int]]:
    G = automorphism_group(X) if G is None else G
    if X.n == 0:
        return []
    return G.orbits()


def _edge_and_arc_orbit_counts(X: Graph, G: PermGroup) -> tuple[int, int]:
    E = np.array(X.edges(), dtype=np.int64).reshape(-1, 2)
    m = len(E)
    if m == 0:
        return 0, 0
    n = X.n
    eid = -np.ones((n, n), dtype=np.int64)
    eid[E[:, 0], E[:, 1]] = np.arange(m)
    eid[E[:, 1], E[:, 0]] = np.arange(m)
    aid = -np.ones((n, n), dtype=np.int64)
    aid[E[:, 0], E[:, 1]] = np.arange(m)
    aid[E[:, 1], E[:, 0]] = np.arange(m, 2 * m)
    arcs = np.concatenate([E, E[:, ::-1]])
    es, ed, as_, ad = [], [], [], []
    for g in _gen_array(G):
        es.append(np.arange(m))
        ed.append(eid[g[E[:, 0]], g[E[:, 1]]])
        as_.append(np.arange(2 * m))
        ad.append(aid[g[arcs[:, 0]], g[arcs[:, 1]]])
    return _orbit_count(m, es, ed), _orbit_count(2 * m, as_, ad)


@dataclass(frozen=True)
class ClassificationFlags:
    connected: bool
    regular: bool
    bipartite: bool
    worthy: bool
    vertex_transitive: bool
    edge_transitive: bool
    arc_transitive: bool
    half_arc_transitive: bool
    semi_symmetric: bool
    valency_multiset: tuple
    aut_order: int

    CSV_FIELDS = ("connected", "regular", "bipartite", "worthy", "vt", "et", "at",
                  "hat", "semisym", "aut_order")

    def csv_values(self) -> list:
        return [int(self.connected), int(self.regular), int(self.bipartite), int(self.worthy),
                int(self.vertex_transitive), int(self.edge_transitive),
                int(self.arc_transitive), int(self.half_arc_transitive),
                int(self.semi_symmetric), self.aut_order]


def classify(X: Graph) -> ClassificationFlags:
    """Symmetry flags computed from the orbits of Aut(X)."""
    if "flags" in X._cache:
        return X._cache["flags"]
    base = X.without_bipartition() if X.bipartition is not None else X
    G = automorphism_group(base)
    degs = X.degrees()
    regular = len(set(degs)) <= 1
    vt = X.n <= 1 or len(G.orbits()) == 1
    e_orb, a_orb = _edge_and_arc_orbit_counts(X, G)
    m = X.num_edges()
    et = e_orb <= 1
    at = a_orb <= 1
    hat = m > 0 and vt and et and not at
    flags = ClassificationFlags(
        connected=is_connected(X),
        regular=regular,
        bipartite=is_bipartite(X),
        worthy=is_worthy(X),
        vertex_transitive=vt,
        edge_transitive=et,
        arc_transitive=at,
        half_arc_transitive=hat,
        semi_symmetric=regular and et and not vt,
        valency_multiset=tuple(sorted(Counter(degs).items())),
        aut_order=G.order(),
    )
    X._cache["flags"] = flags
    return flags


# -- twins and blow-ups ----------------------------------------------------------------


def twin_classes(X: Graph) -> list[list[int]]:
    """Classes of vertices sharing a neighbourhood, ordered by smallest member."""
    groups: dict[int, list[int]] = {}
    for v, r in enumerate(X.rows):
        groups.setdefault(r, []).append(v)
    return sorted(groups.values())


def twin_quotient(X: Graph) -> Graph:
    """Collapse every twin class to one vertex."""
    classes = twin_classes(X)
    cls_of = [0] * X.n
    for i, c in enumerate(classes):
        for v in c:
            cls_of[v] = i
    edges = {(cls_of[u], cls_of[v]) for u, v in X.edges()}
    parts = None
    if X.bipartition is not None:
        U = set(X.bipartition[0])
        parts = ([i for i, c in enumerate(classes) if c[0] in U],
                 [i for i, c in enumerate(classes) if c[0] not in U])
    return Graph(len(classes), sorted(edges), parts)


def blow_up(Y: Graph, k: int, m: int) -> Graph:
    """Replace each first-part vertex by k copies and each second-part vertex by m."""
    if k < 1 or m < 1:
        raise ValueError("blow-up multiplicities must be positive")
    if Y.bipartition is None:
        raise ValueError("blow-up needs a graph with designated parts")
    U = set(Y.bipartition[0])
    copies = []
    nxt = 0
    for v in range(Y.n):
        c = k if v in U else m
        copies.append(list(range(nxt, nxt + c)))
        nxt += c
    edges = [(a, b) for u, v in Y.edges() for a in copies[u] for b in copies[v]]
    newU = [a for v in range(Y.n) if v in U for a in copies[v]]
    newW = [a for v in range(Y.n) if v not in U for a in copies[v]]
    return Graph(nxt, edges, (newU, newW))


def part_preserving_subgroup(X: Graph) -> PermGroup:
    """Automorphisms of a connected bipartite graph that fix each part setwise."""
    col = two_colouring(X)
    if col is None or X.num_edges() == 0:
        raise ValueError("graph is not bipartite")
    if not is_connected(X):
        raise ValueError("graph is not connected")
    G = automorphism_group(X.without_bipartition() if X.bipartition else X)
    part = {v for v in range(X.n) if col[v] == col[0]}
    return G.setwise_stabilizer_index2(part)


def parts_of(X: Graph) -> tuple[list[int], list[int]]:
    """The two colour classes of a connected bipartite graph, containing 0 first."""
    if X.bipartition is not None:
        return list(X.bipartition[0]), list(X.bipartition[1])
    col = two_colouring(X)
    if col is None:
        raise ValueError("graph is not bipartite")
    return [v for v in range(X.n) if col[v] == 0], [v for v in range(X.n) if col[v] == 1]


# -- text formats ----------------------------------------------------------------------


def _n_prefix(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def to_graph6(X: Graph) -> str:
    n = X.n
    bits = []
    for j in range(1, n):
        rj = X.rows[j]
        for i in range(j):
            bits.append(rj >> i & 1)
    while len(bits) % 6:
        bits.append(0)
    body = "".join(chr(63 + int("".join(map(str, bits[i:i + 6])), 2)) for i in range(0, len(bits), 6))
    return _n_prefix(n) + body


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if not s:
        raise ValueError("empty graph6 string")
    vals = [ord(c) - 63 for c in s]
    if any(v < 0 or v > 63 for v in vals):
        raise ValueError(f"invalid graph6 character in {text!r}")
    if vals[0] == 63:
        if len(vals) >= 2 and vals[1] == 63:
            if len(vals) < 8:
                raise ValueError(f"truncated graph6 header in {text!r}")
            n = 0
            for v in vals[2:8]:
                n = (n << 6) | v
            vals = vals[8:]
        else:
            if len(vals) < 4:
                raise ValueError(f"truncated graph6 header in {text!r}")
            n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
            vals = vals[4:]
    else:
        n = vals[0]
        vals = vals[1:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(vals) != need:
        raise ValueError(f"graph6 string has {len(vals)} data bytes, expected {need}")
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if vals[k // 6] >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Graph.from_rows(rows)


def to_edge_list(X: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in X.edges())


def from_edge_list(text: str, n: int | None = None) -> Graph:
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v'")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph(n, edges)
