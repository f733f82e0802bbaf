"""Permutation groups backed by a deterministic Schreier-Sims stabiliser chain."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .perm import Permutation, compose, format_cycles, inverse

__all__ = [
    "PermGroup",
    "CosetAction",
    "symmetric_group",
    "alternating_group",
    "cyclic_group",
    "dihedral_group",
    "generated_subgroup",
    "is_whole_group",
    "core",
    "coset_action",
    "orbit",
    "orbits",
    "stabilizer",
    "group_order",
    "intersection",
    "corefree_subgroups_of_index",
    "are_conjugate_subgroups",
]


def _ident(n):
    return tuple(range(n))


def _orbit_transversal(point, gens):
    """Map each orbit point b to a word-free transversal element u with u[point] == b."""
    n = len(gens[0]) if gens else None
    tr = {point: _ident(n) if n else None}
    if not gens:
        return tr
    queue = [point]
    for b in queue:
        u = tr[b]
        for s in gens:
            c = s[b]
            if c not in tr:
                tr[c] = tuple([s[x] for x in u])
                queue.append(c)
    return tr


@dataclass
class _Chain:
    base: list
    strong: list  # strong generators per level (level i fixes base[:i])
    transversals: list  # list of dict point -> perm

    def order(self) -> int:
        return math.prod(len(t) for t in self.transversals)

    def sift(self, h, start=0):
        k = len(self.base)
        for lev in range(start, k):
            b = h[self.base[lev]]
            t = self.transversals[lev]
            u = t.get(b)
            if u is None:
                return h, lev
            # h * u^-1 : x -> u^-1(h(x))
            uinv = inverse(u)
            h = tuple([uinv[x] for x in h])
        return h, k


def _schreier_sims(n: int, gens: Sequence[tuple], base_prefix: Sequence[int] = ()) -> _Chain:
    ident = _ident(n)
    uniq = []
    seen = set()
    for g in gens:
        g = tuple(g)
        if g != ident and g not in seen:
            seen.add(g)
            uniq.append(g)
    base = list(base_prefix)
    for g in uniq:
        if all(g[b] == b for b in base):
            base.append(next(i for i in range(n) if g[i] != i))
    k = len(base)
    levels = [[s for s in uniq if all(s[b] == b for b in base[:i])] for i in range(k)]
    trans = [_orbit_transversal(base[i], levels[i]) if levels[i] else {base[i]: ident} for i in range(k)]
    chain = _Chain(base, levels, trans)
    # per-level bookkeeping of Schreier generators already known to sift
    done = [set() for _ in range(k)]
    i = k - 1
    while i >= 0:
        found = None
        t = chain.transversals[i]
        for beta in list(t):
            ub = t[beta]
            for si, s in enumerate(chain.strong[i]):
                if (beta, si) in done[i]:
                    continue
                gamma = s[beta]
                ug = t[gamma]
                ug_inv = inverse(ug)
                # ub * s * ug^-1
                sg = tuple([ug_inv[s[x]] for x in ub])
                if sg == ident:
                    done[i].add((beta, si))
                    continue
                h, j = chain.sift(sg, i + 1)
                if h != ident:
                    found = (h, j)
                    break
                done[i].add((beta, si))
            if found:
                break
        if found is None:
            i -= 1
            continue
        h, j = found
        if j == len(chain.base):
            chain.base.append(next(x for x in range(n) if h[x] != x))
            chain.strong.append([])
            chain.transversals.append({chain.base[-1]: ident})
            done.append(set())
        for lev in range(i + 1, j + 1):
            chain.strong[lev].append(h)
            chain.transversals[lev] = _orbit_transversal(chain.base[lev], chain.strong[lev])
            done[lev] = set()
        i = j
    return chain


class PermGroup:
    """A permutation group given by generators.

    The stabiliser chain is computed on first use and cached; groups are
    treated as immutable afterwards.
    """

    def __init__(self, degree: int, generators: Iterable = (), *, order: int | None = None,
                 _chain: _Chain | None = None):
        if degree < 1:
            raise ValueError("degree must be positive")
        self.degree = int(degree)
        gens = []
        for g in generators:
            img = g.images if isinstance(g, Permutation) else tuple(int(x) for x in g)
            if len(img) != degree:
                raise ValueError(f"generator of degree {len(img)} in group of degree {degree}")
            if not isinstance(g, Permutation):
                Permutation(img)  # validates bijection
            gens.append(img)
        self._gens = tuple(gens)
        self._chain = _chain
        self._order_hint = order

    # -- basic data ---------------------------------------------------------

    @property
    def generators(self) -> list[Permutation]:
        return [Permutation._trusted(g) for g in self._gens]

    @property
    def chain(self) -> _Chain:
        if self._chain is None:
            self._chain = _schreier_sims(self.degree, self._gens)
        return self._chain

    @property
    def base(self) -> list[int]:
        return list(self.chain.base)

    def strong_generators(self) -> list[Permutation]:
        if not self.chain.strong:
            return []
        return [Permutation._trusted(g) for g in self.chain.strong[0]]

    def order(self) -> int:
        if self._chain is None and self._order_hint is not None:
            return self._order_hint
        return self.chain.order()

    def __len__(self) -> int:
        return self.order()

    def is_trivial(self) -> bool:
        return all(g == _ident(self.degree) for g in self._gens)

    def contains(self, p) -> bool:
        img = p.images if isinstance(p, Permutation) else tuple(p)
        if len(img) != self.degree:
            return False
        h, j = self.chain.sift(img)
        return j == len(self.chain.base) and h == _ident(self.degree)

    __contains__ = contains

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(other.contains(g) for g in self._gens)

    def equals(self, other: "PermGroup") -> bool:
        return (self.degree == other.degree and self.order() == other.order()
                and self.is_subgroup_of(other))

    # -- orbits and stabilisers ----------------------------------------------

    def orbit(self, point: int) -> list[int]:
        if not 0 <= point < self.degree:
            raise ValueError(f"point {point} out of range for degree {self.degree}")
        seen = {point}
        queue = [point]
        for b in queue:
            for g in self._gens:
                c = g[b]
                if c not in seen:
                    seen.add(c)
                    queue.append(c)
        return sorted(seen)

    def orbits(self) -> list[list[int]]:
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self._gens:
            for i, j in enumerate(g):
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups = {}
        for i in range(self.degree):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def with_base(self, prefix: Sequence[int]) -> "PermGroup":
        """Same group, stabiliser chain rebuilt to start with ``prefix``."""
        gens = self.chain.strong[0] if self._chain is not None and self.chain.strong else self._gens
        ch = _schreier_sims(self.degree, gens, prefix)
        return PermGroup(self.degree, self._gens, _chain=ch)

    def pointwise_stabilizer(self, points: Sequence[int]) -> "PermGroup":
        for p in points:
            if not 0 <= p < self.degree:
                raise ValueError(f"point {p} out of range for degree {self.degree}")
        if not points:
            return self
        ch = self.with_base(points).chain
        k = len(points)
        # the prefix may have been padded only if points repeated; levels >= k fix all points
        if len(ch.base) <= k:
            return PermGroup(self.degree, [])
        sub = _Chain(ch.base[k:], ch.strong[k:], ch.transversals[k:])
        return PermGroup(self.degree, sub.strong[0], _chain=sub)

    def stabilizer(self, point: int) -> "PermGroup":
        return self.pointwise_stabilizer([point])

    def setwise_stabilizer_index2(self, part: set[int]) -> "PermGroup":
        """Subgroup preserving ``part`` when every generator preserves or swaps it.

        Each generator must map ``part`` onto itself or onto its complement;
        the kernel of that sign map is returned via Schreier generators.
        """
        part = set(part)
        signs = []
        for g in self._gens:
            img = {g[x] for x in part}
            if img == part:
                signs.append(0)
            elif img.isdisjoint(part) and len(img) == len(part):
                signs.append(1)
            else:
                raise ValueError("generator neither preserves nor swaps the part")
        swappers = [g for g, s in zip(self._gens, signs) if s]
        if not swappers:
            return self
        t = swappers[0]
        tinv = inverse(t)
        gens = []
        for g, s in zip(self._gens, signs):
            if s == 0:
                gens.append(g)
                gens.append(compose(compose(t, g), tinv))
            else:
                gens.append(compose(g, tinv))
                gens.append(compose(t, g))
        return PermGroup(self.degree, gens)

    # -- elements ----------------------------------------------------------

    def elements_array(self, dtype=np.int16) -> np.ndarray:
        """All elements as rows of an (order x degree) array."""
        n = self.degree
        ch = self.chain
        E = np.arange(n, dtype=dtype)[None, :]
        # element = u_{k-1} * ... * u_0 (apply u_{k-1} first)
        for lev in range(len(ch.base) - 1, -1, -1):
            U = np.array(list(ch.transversals[lev].values()), dtype=dtype)
            # new[a, b] = U[b][E[a]]
            E = U[:, E].transpose(1, 0, 2).reshape(-1, n)
        return E

    def elements(self) -> Iterator[Permutation]:
        for row in self.elements_array():
            yield Permutation._trusted(tuple(int(x) for x in row))

    # -- structure -----------------------------------------------------------

    def normal_closure(self, gens: Iterable) -> "PermGroup":
        """Smallest normal subgroup of ``self`` containing ``gens``."""
        cur = [tuple(g.images if isinstance(g, Permutation) else g) for g in gens]
        cur = [g for g in cur if g != _ident(self.degree)]
        H = PermGroup(self.degree, cur)
        changed = True
        while changed:
            changed = False
            for x in self._gens:
                xinv = inverse(x)
                for h in list(H._gens):
                    c = compose(compose(xinv, h), x)
                    if not H.contains(c):
                        H = PermGroup(self.degree, list(H.chain.strong[0]) + [c])
                        changed = True
        return H

    def derived_subgroup(self) -> "PermGroup":
        comms = []
        for a, b in itertools.combinations(self._gens, 2):
            comms.append(compose(compose(inverse(a), inverse(b)), compose(a, b)))
        return self.normal_closure(comms)

    def is_perfect(self) -> bool:
        return self.derived_subgroup().order() == self.order()

    def is_soluble(self) -> bool:
        G = self
        while not G.is_trivial():
            D = G.derived_subgroup()
            if D.order() == G.order():
                return False
            G = D
        return True

    def conjugate(self, x) -> "PermGroup":
        """``x^-1 H x``."""
        x = x.images if isinstance(x, Permutation) else tuple(x)
        xinv = inverse(x)
        return PermGroup(self.degree, [compose(compose(xinv, g), x) for g in self._gens])

    def small_generating_set(self) -> list[tuple]:
        """Greedy subset of the strong generators that still generates the group."""
        target = self.order()
        chosen = []
        cur = PermGroup(self.degree, [])
        pool = list(self._gens) + [g for lev in self.chain.strong for g in lev]
        for g in pool:
            if cur.order() == target:
                break
            if not cur.contains(g):
                chosen.append(g)
                cur = PermGroup(self.degree, chosen)
        return chosen

    def __repr__(self) -> str:
        gens = ", ".join(format_cycles(g) for g in self._gens) or "()"
        return f"PermGroup(degree={self.degree}, gens=[{gens}])"


# -- constructors ---------------------------------------------------------------

def symmetric_group(n: int) -> PermGroup:
    if n == 1:
        return PermGroup(1, [])
    if n == 2:
        return PermGroup(2, [(1, 0)])
    return PermGroup(n, [Permutation.from_cycles(n, [(0, 1)]),
                         Permutation.from_cycles(n, [tuple(range(n))])])


def alternating_group(n: int) -> PermGroup:
    if n < 3:
        return PermGroup(n, [])
    gens = [Permutation.from_cycles(n, [(0, 1, i)]) for i in range(2, n)]
    return PermGroup(n, gens)


def cyclic_group(n: int) -> PermGroup:
    if n == 1:
        return PermGroup(1, [])
    return PermGroup(n, [Permutation.from_cycles(n, [tuple(range(n))])])


def dihedral_group(n: int) -> PermGroup:
    """Dihedral group of order 2n acting on n points."""
    if n <= 2:
        return symmetric_group(n)
    rot = Permutation.from_cycles(n, [tuple(range(n))])
    refl = Permutation([(-i) % n for i in range(n)])
    return PermGroup(n, [rot, refl])


# -- module-level operations ------------------------------------------------------

def group_order(G: PermGroup) -> int:
    return G.order()


def orbit(G: PermGroup, point: int) -> list[int]:
    return G.orbit(point)


def orbits(G: PermGroup) -> list[list[int]]:
    return G.orbits()


def stabilizer(G: PermGroup, point: int) -> PermGroup:
    return G.stabilizer(point)


def generated_subgroup(degree: int, perms: Iterable) -> PermGroup:
    return PermGroup(degree, perms)


def is_whole_group(G: PermGroup, H: PermGroup) -> bool:
    """True when the subgroup ``H`` of ``G`` is all of ``G``."""
    if G.degree != H.degree:
        raise ValueError("degree mismatch")
    return H.order() == G.order()


def _require_subgroup(G: PermGroup, H: PermGroup):
    if G.degree != H.degree or not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of G")


def core(G: PermGroup, H: PermGroup) -> PermGroup:
    """Largest subgroup of ``H`` normal in ``G`` (intersection of conjugates)."""
    _require_subgroup(G, H)
    if H.order() == G.order():
        return G
    act = coset_action(G, H)
    cur = H
    for rep in act.coset_reps:
        conj = H.conjugate(rep)
        cur = intersection(cur, conj)
        if cur.is_trivial():
            break
    return cur


def intersection(A: PermGroup, B: PermGroup) -> PermGroup:
    """Intersection by filtering the smaller group's elements."""
    if A.order() > B.order():
        A, B = B, A
    gens = []
    cur = PermGroup(A.degree, [])
    for row in A.elements_array():
        g = tuple(int(x) for x in row)
        if B.contains(g) and not cur.contains(g):
            gens.append(g)
            cur = PermGroup(A.degree, gens)
    return cur


@dataclass
class CosetAction:
    group: PermGroup
    subgroup: PermGroup
    degree: int
    images_of_generators: list
    coset_reps: list

    def image_group(self) -> PermGroup:
        return PermGroup(self.degree, self.images_of_generators)

    def kernel(self) -> PermGroup:
        """Elements acting trivially on the cosets."""
        n, m = self.group.degree, self.degree
        diag = [tuple(g) + tuple(n + x for x in img)
                for g, img in zip(self.group._gens, (p.images for p in self.images_of_generators))]
        D = PermGroup(n + m, diag)
        K = D.pointwise_stabilizer(list(range(n, n + m)))
        gens = [tuple(s[:n]) for s in K._gens]
        return PermGroup(n, gens)

    def is_faithful(self) -> bool:
        return self.kernel().is_trivial()


def coset_action(G: PermGroup, H: PermGroup) -> CosetAction:
    """Action of ``G`` by right multiplication on the right cosets ``H x``."""
    _require_subgroup(G, H)
    n = G.degree
    reps = [_ident(n)]
    index = G.order() // H.order()

    def locate(y):
        for j, r in enumerate(reps):
            if H.contains(compose(y, inverse(r))):
                return j
        return -1

    queue = [0]
    for j in queue:
        r = reps[j]
        for g in G._gens:
            y = compose(r, g)
            if locate(y) < 0:
                reps.append(y)
                queue.append(len(reps) - 1)
    if len(reps) != index:  # pragma: no cover - internal consistency
        raise RuntimeError("coset enumeration failed")
    images = []
    for g in G._gens:
        images.append(Permutation._trusted(tuple(locate(compose(r, g)) for r in reps)))
    if not G._gens:
        images = []
    return CosetAction(G, H, index, images, [Permutation._trusted(r) for r in reps])


def corefree_subgroups_of_index(G: PermGroup, m: int, **kwargs) -> list[PermGroup]:
    """Core-free subgroups of index m up to conjugacy in G (see ``subgroups``)."""
    from .subgroups import corefree_subgroups_of_index as impl

    return impl(G, m, **kwargs)


def are_conjugate_subgroups(G: PermGroup, H1: PermGroup, H2: PermGroup, **kwargs) -> bool:
    """True when H1 and H2 are conjugate in G (see ``subgroups``)."""
    from .subgroups import are_conjugate_subgroups as impl

    return impl(G, H1, H2, **kwargs)
