"""Two families of semi-symmetric graphs.

``folkman_blowup(k)`` builds a worthy bipartite graph X on A_1 ⊔ A_2 and
B = A_1 × A_2 and its (k, 2)-blow-up Y, a regular graph of order 4k² that is
edge-transitive but not vertex-transitive.

``symplectic_gq(q)`` builds the generalised quadrangle W(q) of points and
totally isotropic lines of a symplectic form in dimension 4 over the field of
order q.  Its Levi graph and the bipartite complement of the Levi graph are
both semi-symmetric; the complement is also worthy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import Graph, automorphism_group, blow_up, classify, twin_classes
from .perm import Permutation

__all__ = [
    "FiniteField",
    "SymplecticGQ",
    "SUPPORTED_Q",
    "folkman_base",
    "folkman_blowup",
    "wreath_generators",
    "symplectic_gq",
    "levi_and_complement",
    "construction_report",
    "valency_part_ratio",
]

SUPPORTED_Q = (3, 5, 7, 9)


# -- blow-up family -------------------------------------------------------------------


def _b_vertex(k: int, a1: int, a2: int) -> int:
    return 2 * k + a1 * k + a2


def folkman_base(k: int) -> Graph:
    """The worthy graph X with parts A = A_1 ⊔ A_2 and B = A_1 × A_2.

    Vertex i < k is the i-th point of A_1, vertex k + i the i-th point of A_2,
    and 2k + a1·k + a2 the pair (a1, a2).
    """
    if k < 3:
        raise ValueError("k must be at least 3")
    edges = []
    for a1 in range(k):
        for a2 in range(k):
            b = _b_vertex(k, a1, a2)
            edges.extend((a, b) for a in range(k) if a != a1)
            edges.extend((k + a, b) for a in range(k) if a != a2)
    n = 2 * k + k * k
    return Graph(n, edges, (range(2 * k), range(2 * k, n)))


def folkman_blowup(k: int) -> tuple[Graph, Graph]:
    """(X, Y) with Y the blow-up of X taking k copies of A and 2 copies of B."""
    X = folkman_base(k)
    return X, blow_up(X, k, 2)


def wreath_generators(k: int) -> list[Permutation]:
    """Automorphisms of the base graph generating S_k wr C_2.

    Two generators permute A_1 (and the first coordinate of B), two permute
    A_2, and the last swaps A_1 with A_2 and the coordinates of B.
    """
    if k < 3:
        raise ValueError("k must be at least 3")
    n = 2 * k + k * k

    def on_a1(sigma):
        img = list(range(n))
        for a in range(k):
            img[a] = sigma[a]
        for a1, a2 in itertools.product(range(k), repeat=2):
            img[_b_vertex(k, a1, a2)] = _b_vertex(k, sigma[a1], a2)
        return Permutation(img)

    def on_a2(sigma):
        img = list(range(n))
        for a in range(k):
            img[k + a] = k + sigma[a]
        for a1, a2 in itertools.product(range(k), repeat=2):
            img[_b_vertex(k, a1, a2)] = _b_vertex(k, a1, sigma[a2])
        return Permutation(img)

    swap = list(range(n))
    for a in range(k):
        swap[a], swap[k + a] = k + a, a
    for a1, a2 in itertools.product(range(k), repeat=2):
        swap[_b_vertex(k, a1, a2)] = _b_vertex(k, a2, a1)
    transposition = [1, 0] + list(range(2, k))
    rotation = list(range(1, k)) + [0]
    return [on_a1(transposition), on_a1(rotation), on_a2(transposition), on_a2(rotation),
            Permutation(swap)]


# -- finite fields and the symplectic quadrangle --------------------------------------


class FiniteField:
    """The field of order q for q prime or q = 9.

    Elements are 0..q-1.  For q = 9 the element a + 3b stands for a + b·i with
    i² = -1 over the field of order 3.
    """

    def __init__(self, q: int):
        if q not in SUPPORTED_Q:
            raise ValueError(f"unsupported field order {q}; supported: {SUPPORTED_Q}")
        self.q = q
        if q == 9:
            add = np.zeros((9, 9), dtype=np.int64)
            mul = np.zeros((9, 9), dtype=np.int64)
            for x, y in itertools.product(range(9), repeat=2):
                a, b = x % 3, x // 3
                c, d = y % 3, y // 3
                add[x, y] = (a + c) % 3 + 3 * ((b + d) % 3)
                mul[x, y] = (a * c - b * d) % 3 + 3 * ((a * d + b * c) % 3)
        else:
            r = np.arange(q)
            add = (r[:, None] + r[None, :]) % q
            mul = (r[:, None] * r[None, :]) % q
        self.add_table = add
        self.mul_table = mul
        self.neg = np.array([int(np.flatnonzero(add[x] == 0)[0]) for x in range(q)])
        self.inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            self.inv[x] = int(np.flatnonzero(mul[x] == 1)[0])
        self._check_axioms()

    def _check_axioms(self) -> None:
        add, mul = self.add_table, self.mul_table
        if not (np.array_equal(add, add.T) and np.array_equal(mul, mul.T)):
            raise RuntimeError("field tables are not commutative")
        for x in range(1, self.q):
            if sorted(mul[x, 1:]) != list(range(1, self.q)):
                raise RuntimeError("nonzero elements do not form a group")

    def add(self, x: int, y: int) -> int:
        return int(self.add_table[x, y])

    def mul(self, x: int, y: int) -> int:
        return int(self.mul_table[x, y])

    def sub(self, x: int, y: int) -> int:
        return int(self.add_table[x, self.neg[y]])


@dataclass
class SymplecticGQ:
    q: int
    field: FiniteField
    points: list[tuple[int, ...]]
    lines: list[tuple[int, ...]]

    def form(self, x, y) -> int:
        """x1y3 + x2y4 - x3y1 - x4y2."""
        F = self.field
        s = F.add(F.mul(x[0], y[2]), F.mul(x[1], y[3]))
        t = F.add(F.mul(x[2], y[0]), F.mul(x[3], y[1]))
        return F.sub(s, t)

    def form_is_alternating_nondegenerate(self) -> bool:
        basis = [tuple(int(i == j) for j in range(4)) for i in range(4)]
        for x in self.points:
            if self.form(x, x) != 0:
                return False
            if all(self.form(x, e) == 0 for e in basis):
                return False
        return True

    def lines_through(self) -> list[list[int]]:
        out = [[] for _ in self.points]
        for li, L in enumerate(self.lines):
            for p in L:
                out[p].append(li)
        return out


def _normalize(F: FiniteField, v) -> tuple[int, ...]:
    for c in v:
        if c:
            s = int(F.inv[c])
            return tuple(F.mul(s, x) for x in v)
    raise ValueError("zero vector")


def symplectic_gq(q: int) -> SymplecticGQ:
    """Points and totally isotropic lines of W(q)."""
    if q % 2 == 0:
        raise ValueError(f"q = {q} is even; only odd q is supported")
    F = FiniteField(q)
    points = [v for v in itertools.product(range(q), repeat=4)
              if any(v) and v[next(i for i, c in enumerate(v) if c)] == 1]
    index = {p: i for i, p in enumerate(points)}
    gq = SymplecticGQ(q, F, points, [])
    lines = set()
    for i, p in enumerate(points):
        for r in points:
            if r <= p or gq.form(p, r) != 0:
                continue
            span = {i}
            for a in range(q):
                v = tuple(F.add(x, F.mul(a, y)) for x, y in zip(r, p))
                span.add(index[_normalize(F, v)])
            lines.add(tuple(sorted(span)))
    gq.lines = sorted(lines)
    expected = q ** 3 + q ** 2 + q + 1
    if len(points) != expected or len(gq.lines) != expected:
        raise RuntimeError(f"W({q}) has {len(points)} points and {len(gq.lines)} lines, "
                           f"expected {expected} of each")
    if any(len(L) != q + 1 for L in gq.lines) or \
            any(len(t) != q + 1 for t in gq.lines_through()):
        raise RuntimeError(f"W({q}) incidence is not ({q + 1}, {q + 1})")
    return gq


def levi_and_complement(gq: SymplecticGQ) -> tuple[Graph, Graph]:
    """Point-line incidence graph and its bipartite complement.

    Points are vertices 0..P-1 and lines P..2P-1; both graphs carry these parts.
    """
    P = len(gq.points)
    parts = (range(P), range(P, 2 * P))
    inc = {(p, P + li) for li, L in enumerate(gq.lines) for p in L}
    levi = Graph(2 * P, sorted(inc), parts)
    comp = Graph(2 * P, [(p, P + li) for p in range(P) for li in range(P)
                         if (p, P + li) not in inc], parts)
    return levi, comp


# -- reporting -------------------------------------------------------------------------


def valency_part_ratio(X: Graph) -> Fraction:
    """Valency over part size of a regular graph with two equal parts."""
    if X.bipartition is None or len(X.bipartition[0]) != len(X.bipartition[1]):
        raise ValueError("graph needs two equal parts")
    degs = set(X.degrees())
    if len(degs) != 1:
        raise ValueError("graph is not regular")
    return Fraction(degs.pop(), len(X.bipartition[0]))


def construction_report(X: Graph, *, aut: bool = True) -> dict:
    """Order, valencies, flags, twin-class sizes and optionally |Aut| of a graph."""
    f = classify(X) if aut else None
    degs = sorted(set(X.degrees()))
    rep = {
        "order": X.n,
        "edges": X.num_edges(),
        "valency": degs[0] if len(degs) == 1 else degs,
        "twin_class_sizes": sorted({len(c) for c in twin_classes(X)}),
    }
    if len(degs) == 1 and X.bipartition is not None and X.n:
        rep["valency_part_ratio"] = valency_part_ratio(X)
    if f is not None:
        rep.update({
            "connected": f.connected, "bipartite": f.bipartite, "worthy": f.worthy,
            "vt": f.vertex_transitive, "et": f.edge_transitive, "at": f.arc_transitive,
            "semisym": f.semi_symmetric, "aut_order": f.aut_order,
        })
    return rep
