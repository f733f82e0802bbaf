"""Conjugacy classes of subgroups of small permutation groups.

Everything here works on an :class:`ElementTable`, the full list of group
elements as rows of a small integer array, so that conjugation, products and
membership tests are vectorised numpy operations.  Subgroups are sorted arrays
of row indices into the table.

Classes are found by cyclic extension (every soluble step ``H < K`` with
``|K:H|`` prime) starting from the trivial group and from the perfect
subgroups, which are collected by a sweep over pairs of prime-order elements.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .permgroup import PermGroup

__all__ = [
    "ElementTable",
    "DEFAULT_MAX_ORDER",
    "subgroups_up_to_conjugacy",
    "corefree_subgroups_of_index",
    "are_conjugate_subgroups",
    "normal_hall_subgroup",
]

DEFAULT_MAX_ORDER = 10**5


def _primes_dividing(k: int) -> list[int]:
    out = []
    p = 2
    while p * p <= k:
        if k % p == 0:
            out.append(p)
            while k % p == 0:
                k //= p
        p += 1
    if k > 1:
        out.append(k)
    return out


def _is_prime(k: int) -> bool:
    return k >= 2 and _primes_dividing(k) == [k]


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    phi = p - 1
    fac = _primes_dividing(phi)
    for r in range(2, p):
        if all(pow(r, phi // f, p) != 1 for f in fac):
            return r
    raise ValueError(p)  # pragma: no cover


def _compose_rows(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    return kernels.compose_rows(np.ascontiguousarray(P), np.ascontiguousarray(Q))


def _power_rows(P: np.ndarray, k: int) -> np.ndarray:
    n = P.shape[1]
    result = np.broadcast_to(np.arange(n, dtype=P.dtype), P.shape).copy()
    base = P
    while k:
        if k & 1:
            result = _compose_rows(result, base)
        k >>= 1
        if k:
            base = _compose_rows(base, base)
    return result


def _row_orders(E: np.ndarray) -> np.ndarray:
    N, n = E.shape
    start = np.arange(n, dtype=np.intp)
    cur = np.broadcast_to(start, (N, n)).copy()
    lens = np.zeros((N, n), dtype=np.int64)
    for t in range(1, n + 1):
        cur = np.take_along_axis(E, cur, axis=1).astype(np.intp)
        hit = (cur == start) & (lens == 0)
        lens[hit] = t
    return np.lcm.reduce(lens, axis=1)


def _components(num: int, src: list, dst: list) -> np.ndarray:
    """Connected-component labels, numbered by smallest member."""
    if num == 0:
        return np.zeros(0, dtype=np.int64)
    if src:
        s = np.concatenate(src)
        d = np.concatenate(dst)
    else:
        s = d = np.zeros(0, dtype=np.int64)
    mat = coo_matrix((np.ones(len(s), dtype=np.int8), (s, d)), shape=(num, num))
    _, lab = connected_components(mat, directed=True, connection="weak")
    _, first = np.unique(lab, return_index=True)
    order = np.argsort(first)
    remap = np.empty(len(first), dtype=np.int64)
    remap[order] = np.arange(len(first))
    return remap[lab]


class ElementTable:
    """All elements of a permutation group, sorted by an integer code."""

    def __init__(self, G: PermGroup):
        n = G.degree
        if n > 16:
            raise ValueError("element tables support degree at most 16")
        self.group = G
        self.n = n
        E = G.elements_array(np.int8)
        codes = self.encode(E)
        perm = np.argsort(codes, kind="stable")
        self.E = np.ascontiguousarray(E[perm])
        self.codes = codes[perm]
        self.N = len(self.codes)
        # codes order rows lexicographically, so in the full symmetric group
        # the row index is the Lehmer rank
        self.is_symmetric = self.N == math.factorial(n)
        self.Einv = np.argsort(self.E, axis=1).astype(np.int8)
        self.inv = self.index(self.Einv)
        self.identity = int(self.index(np.arange(n, dtype=np.int8)[None, :])[0])
        self._orders = None
        self._class_id = None
        self._class_sizes = None

    # -- coding -----------------------------------------------------------

    def encode(self, A: np.ndarray) -> np.ndarray:
        A = np.asarray(A)
        n = A.shape[1]
        c = np.zeros(A.shape[0], dtype=np.uint64)
        for i in range(n):
            c |= A[:, i].astype(np.uint64) << np.uint64(4 * (n - 1 - i))
        return c

    def index(self, A: np.ndarray) -> np.ndarray:
        A = np.asarray(A)
        if self.is_symmetric:
            return kernels.lehmer_rank(np.ascontiguousarray(A, dtype=np.int8))
        c = self.encode(A)
        pos = np.searchsorted(self.codes, c)
        pos = np.minimum(pos, self.N - 1)
        if not np.all(self.codes[pos] == c):
            raise ValueError("permutation not in group")
        return pos.astype(np.int64)

    def index_of(self, p) -> int:
        return int(self.index(np.asarray(tuple(p), dtype=np.int8)[None, :])[0])

    def perm(self, i: int) -> tuple:
        return tuple(int(x) for x in self.E[i])

    # -- arithmetic ---------------------------------------------------------

    def mul(self, a, b) -> np.ndarray:
        """Indices of ``a * b`` (elementwise, broadcasting scalars)."""
        a = np.atleast_1d(a)
        b = np.atleast_1d(b)
        if len(b) == 1:
            R = self.E[b[0]][self.E[a].astype(np.intp)]
        elif len(a) == 1:
            R = np.take_along_axis(self.E[b], np.broadcast_to(self.E[a[0]].astype(np.intp), (len(b), self.n)), 1)
        else:
            R = np.take_along_axis(self.E[b], self.E[a].astype(np.intp), 1)
        return self.index(R)

    def conj_by_many(self, h: int, X: np.ndarray) -> np.ndarray:
        """Indices of ``x^-1 h x`` for each x in X."""
        X = np.asarray(X, dtype=np.int64)
        return self.index(kernels.conj_one_by_rows(self.E, self.Einv, self.E[h], X))

    def conj_many_by(self, Hs: np.ndarray, x: int) -> np.ndarray:
        """Indices of ``x^-1 h x`` for each h in Hs."""
        Hs = np.asarray(Hs, dtype=np.int64)
        return self.index(kernels.conj_rows_by_one(self.E, self.Einv, Hs, int(x)))

    def power(self, X: np.ndarray, k: int) -> np.ndarray:
        return self.index(_power_rows(self.E[X], k))

    # -- invariants ------------------------------------------------------------

    @property
    def orders(self) -> np.ndarray:
        if self._orders is None:
            self._orders = _row_orders(self.E)
        return self._orders

    @property
    def class_id(self) -> np.ndarray:
        """Conjugacy class label of every element."""
        if self._class_id is None:
            allx = np.arange(self.N)
            src, dst = [], []
            for g in self.group.generators:
                gi = self.index_of(g.images)
                src.append(allx)
                dst.append(self.conj_many_by(allx, gi))
            self._class_id = _components(self.N, src, dst)
            self._class_sizes = np.bincount(self._class_id)
        return self._class_id

    @property
    def class_sizes(self) -> np.ndarray:
        self.class_id
        return self._class_sizes

    # -- subgroups ---------------------------------------------------------------

    def closure(self, gens) -> np.ndarray:
        gens = [int(g) for g in gens if int(g) != self.identity]
        if not gens:
            return np.array([self.identity], dtype=np.int64)
        H = PermGroup(self.n, [self.perm(g) for g in gens])
        return np.sort(self.index(H.elements_array(np.int8)))

    @staticmethod
    def member(S: np.ndarray, X: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(S, X)
        pos = np.minimum(pos, len(S) - 1)
        return S[pos] == X

    def normalizer(self, S: np.ndarray, gens) -> np.ndarray:
        cand = np.arange(self.N)
        for h in gens:
            if len(cand) == len(S):
                break
            cand = cand[self.member(S, self.conj_by_many(int(h), cand))]
        return cand

    def centralizer_of(self, a: int) -> np.ndarray:
        allx = np.arange(self.N)
        return allx[self.conj_by_many(a, allx) == a]

    def generators_of(self, S: np.ndarray) -> list[int]:
        """A small generating set for the subgroup with element set S."""
        if len(S) == self.N:
            return [self.index_of(g.images) for g in self.group.generators] or [self.identity]
        gens: list[int] = []
        cur = np.array([self.identity], dtype=np.int64)
        rng = np.random.default_rng(len(S))
        while len(cur) < len(S):
            rest = S[~self.member(cur, S)]
            # high-order elements tend to finish the job quickly
            ords = self.orders[rest]
            best = rest[ords == ords.max()]
            g = int(best[rng.integers(len(best))])
            gens.append(g)
            cur = self.closure(gens)
        return gens

    def core(self, S: np.ndarray) -> np.ndarray:
        cur = S
        gens = [self.index_of(g.images) for g in self.group.generators]
        while True:
            keep = np.ones(len(cur), dtype=bool)
            for g in gens:
                keep &= self.member(cur, self.conj_many_by(cur, g))
            if keep.all():
                return cur
            cur = cur[keep]

    def as_group(self, S: np.ndarray, gens=None) -> PermGroup:
        if gens is None:
            gens = self.generators_of(S)
        gens = [g for g in gens if g != self.identity]
        return PermGroup(self.n, [self.perm(g) for g in gens], order=len(S))

    def elements_of(self, H: PermGroup) -> np.ndarray:
        return np.sort(self.index(H.elements_array(np.int8)))


# -- conjugacy of subgroups ----------------------------------------------------


def _cycles_of(p) -> list[list[int]]:
    n = len(p)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        out.append(cyc)
    return out


def _symmetric_centralizer(p) -> np.ndarray:
    """All elements of the centraliser of ``p`` in the full symmetric group."""
    n = len(p)
    cycles = sorted(_cycles_of(p), key=len)
    gens = []
    for cyc in cycles:
        if len(cyc) > 1:
            img = list(range(n))
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
            gens.append(tuple(img))
    for c1, c2 in zip(cycles, cycles[1:]):
        if len(c1) == len(c2):
            img = list(range(n))
            for a, b in zip(c1, c2):
                img[a] = b
                img[b] = a
            gens.append(tuple(img))
    return PermGroup(n, gens).elements_array(np.int8)


def _symmetric_conjugator(p, q) -> np.ndarray:
    """Some x in the full symmetric group with ``x^-1 p x == q``."""
    n = len(p)
    cp = sorted(_cycles_of(p), key=len)
    cq = sorted(_cycles_of(q), key=len)
    x = np.zeros(n, dtype=np.int8)
    for a, b in zip(cp, cq):
        for i, j in zip(a, b):
            x[i] = j
    return x


@dataclass
class _Sub:
    elems: np.ndarray
    gens: list
    key: tuple
    serial: int = 0
    group: PermGroup | None = field(default=None, repr=False)


class _Lattice:
    def __init__(self, table: ElementTable, targets: set[int] | None):
        self.T = table
        self.targets = targets
        self.classes: list[_Sub] = []
        self.by_key: dict = {}
        self.queue: list = []

    def wanted(self, order: int) -> bool:
        if self.targets is None:
            return True
        return any(t % order == 0 for t in self.targets)

    def key(self, S: np.ndarray, gens) -> tuple:
        T = self.T
        hist = np.bincount(T.class_id[S])
        nz = np.nonzero(hist)[0]
        orbits = PermGroup(T.n, [T.perm(g) for g in gens if g != T.identity]).orbits()
        return (len(S), tuple(zip(nz.tolist(), hist[nz].tolist())),
                tuple(sorted(len(o) for o in orbits)))

    def add(self, S: np.ndarray, gens) -> bool:
        k = self.key(S, gens)
        for other in self.by_key.get(k, ()):
            if conjugate_in_table(self.T, S, gens, other.elems) is not None:
                return False
        sub = _Sub(S, list(gens), k, serial=len(self.classes))
        self.classes.append(sub)
        self.by_key.setdefault(k, []).append(sub)
        heapq.heappush(self.queue, (len(S), sub.serial))
        return True

    def run(self):
        while self.queue:
            _, serial = heapq.heappop(self.queue)
            self.extend(self.classes[serial])

    def extend(self, H: _Sub):
        T = self.T
        S = H.elems
        hord = len(S)
        primes = [p for p in _primes_dividing(T.N // hord) if self.wanted(p * hord)]
        if not primes:
            return
        Nrm = T.normalizer(S, H.gens)
        q = len(Nrm) // hord
        primes = [p for p in primes if q % p == 0]
        if not primes:
            return
        outside = Nrm[~T.member(S, Nrm)]
        cands = []
        roots = []
        for p in primes:
            c = outside[T.member(S, T.power(outside, p))]
            cands.append(c)
            roots.append(np.full(len(c), _primitive_root(p)))
        C = np.concatenate(cands)
        if len(C) == 0:
            return
        R = np.concatenate(roots)
        srt = np.argsort(C)
        C = C[srt]
        R = R[srt]
        num = len(C)
        allpos = np.arange(num)
        src, dst = [], []
        for h in H.gens:
            if h == T.identity:
                continue
            src.append(allpos)
            dst.append(np.searchsorted(C, T.mul(C, h)))
        for r in np.unique(R):
            if r == 1:
                continue
            sel = allpos[R == r]
            src.append(sel)
            dst.append(np.searchsorted(C, T.power(C[sel], int(r))))
        for x in T.generators_of(Nrm):
            if x == T.identity:
                continue
            src.append(allpos)
            dst.append(np.searchsorted(C, T.conj_many_by(C, x)))
        lab = _components(num, src, dst)
        _, first = np.unique(lab, return_index=True)
        for pos in sorted(first):
            g = int(C[pos])
            gens = [x for x in H.gens if x != T.identity] + [g]
            K = T.closure(gens)
            self.add(K, gens)

    def perfect_sweep(self):
        T = self.T
        G = T.group
        R = G
        while True:
            D = R.derived_subgroup()
            if D.order() == R.order():
                break
            R = D
        if R.is_trivial():
            return
        Relems = T.elements_of(R)
        pr = Relems[np.array([_is_prime(int(o)) for o in T.orders[Relems]], dtype=bool)]
        cid = T.class_id[pr]
        _, first = np.unique(cid, return_index=True)
        reps = sorted(int(pr[i]) for i in first)
        seen_pairs = set()
        seen_perfect: dict[int, list[PermGroup]] = {}
        for a in reps:
            Ca = T.centralizer_of(a)
            cgens = [x for x in T.generators_of(Ca) if x != T.identity]
            num = len(pr)
            allpos = np.arange(num)
            src, dst = [], []
            for x in cgens:
                src.append(allpos)
                dst.append(np.searchsorted(pr, T.conj_many_by(pr, x)))
            lab = _components(num, src, dst)
            _, bfirst = np.unique(lab, return_index=True)
            for pos in sorted(bfirst):
                b = int(pr[pos])
                # pairs with the rarer class first cover the rest up to conjugacy
                if b == a or (a, b) in seen_pairs or T.class_id[b] < T.class_id[a]:
                    continue
                seen_pairs.add((a, b))
                K = PermGroup(T.n, [T.perm(a), T.perm(b)])
                while True:
                    D = K.derived_subgroup()
                    if D.order() == K.order():
                        break
                    K = D
                if K.is_trivial() or not self.wanted(K.order()):
                    continue
                # equal order plus containment means equal; avoids listing big groups again
                same = seen_perfect.setdefault(K.order(), [])
                if any(all(P.contains(g) for g in K.generators) for P in same):
                    continue
                same.append(K)
                S = T.elements_of(K)
                self.add(S, [T.index_of(g) for g in K.small_generating_set()])


def conjugate_in_table(T: ElementTable, S1: np.ndarray, gens1, S2: np.ndarray):
    """Index of some x with ``S1^x == S2`` or None."""
    if len(S1) != len(S2):
        return None
    if np.array_equal(S1, S2):
        return T.identity
    gens1 = [g for g in gens1 if g != T.identity]
    if not gens1:
        return T.identity
    if T.is_symmetric and T.N > 5040:
        return _conjugate_symmetric(T, S1, gens1, S2)
    cand = np.arange(T.N)
    for h in gens1:
        cand = cand[T.member(S2, T.conj_by_many(h, cand))]
        if len(cand) == 0:
            return None
    return int(cand[0])


def _conjugate_symmetric(T: ElementTable, S1, gens1, S2):
    cid = T.class_id
    h1 = np.bincount(cid[S1], minlength=len(T.class_sizes))
    h2 = np.bincount(cid[S2], minlength=len(T.class_sizes))
    if not np.array_equal(h1, h2):
        return None
    present = np.nonzero(h1)[0]
    cent = T.N // T.class_sizes[present]
    cost = h2[present] * cent
    c = int(present[np.argmin(cost)])
    k1 = int(S1[np.nonzero(cid[S1] == c)[0][0]])
    p1 = T.perm(k1)
    Cent = _symmetric_centralizer(p1)
    targets = S2[cid[S2] == c]
    blocks = []
    for k2 in targets:
        x0 = _symmetric_conjugator(p1, T.perm(int(k2)))
        blocks.append(x0[Cent.astype(np.intp)])
    X = np.concatenate(blocks)
    Xinv = np.argsort(X, axis=1).astype(np.intp)
    codes2 = T.codes[S2]
    for h in gens1:
        if len(X) == 0:
            return None
        hp = T.E[h].astype(np.intp)
        Y = np.take_along_axis(X, hp[Xinv], 1)
        ok = T.member(codes2, T.encode(Y))
        X = X[ok]
        Xinv = Xinv[ok]
    if len(X) == 0:
        return None
    return int(T.index(X[:1])[0])


# -- public API ----------------------------------------------------------------


def _check_order(G: PermGroup, max_order: int | None):
    bound = DEFAULT_MAX_ORDER if max_order is None else max_order
    if G.order() > bound:
        raise ValueError(f"group order {G.order()} exceeds bound {bound}")


def _lattice(G: PermGroup, targets, max_order, table=None) -> tuple[ElementTable, list[_Sub]]:
    _check_order(G, max_order)
    T = table if table is not None else ElementTable(G)
    L = _Lattice(T, targets)
    L.add(np.array([T.identity], dtype=np.int64), [T.identity])
    L.perfect_sweep()
    L.run()
    subs = sorted(L.classes, key=lambda s: (len(s.elems), s.serial))
    if targets is not None:
        subs = [s for s in subs if len(s.elems) in targets]
    for s in subs:
        s.group = T.as_group(s.elems, [g for g in s.gens if g != T.identity] or None)
    return T, subs


def subgroups_up_to_conjugacy(G: PermGroup, *, max_order: int | None = None,
                              orders=None) -> list[PermGroup]:
    """One representative per conjugacy class of subgroups of ``G``.

    ``orders`` optionally restricts the output (and the search) to subgroups
    whose order lies in the given collection.
    """
    targets = None if orders is None else {int(o) for o in orders}
    _, subs = _lattice(G, targets, max_order)
    return [s.group for s in subs]


def are_conjugate_subgroups(G: PermGroup, H1: PermGroup, H2: PermGroup, *,
                            max_order: int | None = None) -> bool:
    for H in (H1, H2):
        if H.degree != G.degree or not H.is_subgroup_of(G):
            raise ValueError("not a subgroup of G")
    if H1.order() != H2.order():
        return False
    if sorted(map(len, H1.orbits())) != sorted(map(len, H2.orbits())):
        return False
    if H1.equals(H2):
        return True
    _check_order(G, max_order if max_order is not None else 10**7)
    T = ElementTable(G)
    S1 = T.elements_of(H1)
    S2 = T.elements_of(H2)
    gens1 = [T.index_of(g.images) for g in H1.generators]
    return conjugate_in_table(T, S1, gens1, S2) is not None


def _sylow(T: ElementTable, p: int) -> np.ndarray:
    target = 1
    k = T.N
    while k % p == 0:
        target *= p
        k //= p
    P = np.array([T.identity], dtype=np.int64)
    gens: list[int] = []
    porder = np.array([_is_prime_power_of(int(o), p) for o in range(T.orders.max() + 1)])
    while len(P) < target:
        Nrm = T.normalizer(P, gens or [T.identity])
        out = Nrm[~T.member(P, Nrm)]
        out = out[porder[T.orders[out]]]
        g = int(out[0])
        gens.append(g)
        P = T.closure(gens)
    return P


def _is_prime_power_of(k: int, p: int) -> bool:
    if k < 1:
        return False
    while k % p == 0:
        k //= p
    return k == 1


def normal_hall_subgroup(G: PermGroup, table: ElementTable | None = None) -> PermGroup | None:
    """A proper nontrivial normal Hall subgroup among normal closures of Sylow subgroups."""
    order = G.order()
    if order == 1:
        return None
    T = table if table is not None else ElementTable(G)
    best = None
    for p in _primes_dividing(order):
        P = _sylow(T, p)
        N = G.normal_closure([T.perm(int(x)) for x in T.generators_of(P)])
        n = N.order()
        if 1 < n < order and math.gcd(n, order // n) == 1:
            if best is None or n > best.order():
                best = N
    return best


def _corefree_plain(G: PermGroup, m: int, max_order, table=None) -> list[PermGroup]:
    target = G.order() // m
    T, subs = _lattice(G, {target}, max_order, table)
    out = []
    for s in subs:
        if len(T.core(s.elems)) == 1:
            out.append(s.group)
    return out


def corefree_subgroups_of_index(G: PermGroup, m: int, *, use_hall: bool = True,
                                max_order: int | None = None) -> list[PermGroup]:
    """Core-free subgroups of index ``m`` in ``G``, one per conjugacy class."""
    if m <= 0:
        raise ValueError("index must be positive")
    order = G.order()
    if order % m:
        return []
    if m == 1:
        return [G] if order == 1 else []
    _check_order(G, max_order)
    T = ElementTable(G)
    N = normal_hall_subgroup(G, T) if use_hall else None
    if N is None:
        return _corefree_plain(G, m, max_order, T)
    q = order // N.order()
    d = math.gcd(m, q)
    from .permgroup import coset_action

    act = coset_action(G, N)
    Q = act.image_group()
    if d == 1:
        lifts = [[g.images for g in G.generators]]
    else:
        reps = [r.images for r in act.coset_reps]
        lifts = []
        for L in subgroups_up_to_conjugacy(Q, orders=[q // d]):
            lifts.append([reps[g.images[0]] for g in L.generators])
    target = order // m
    found: list[np.ndarray] = []
    found_gens: list[list[int]] = []
    out = []
    for extra in lifts:
        J = PermGroup(G.degree, [g.images for g in N.generators] + list(extra))
        for H in _corefree_candidates(J, target, max_order):
            S = T.elements_of(H)
            if len(T.core(S)) != 1:
                continue
            gens = [T.index_of(g.images) for g in H.generators]
            if any(conjugate_in_table(T, S, gens, F) is not None for F in found):
                continue
            found.append(S)
            found_gens.append(gens)
            out.append(H)
    out.sort(key=lambda H: H.order())
    return out


def _corefree_candidates(J: PermGroup, target: int, max_order) -> list[PermGroup]:
    _, subs = _lattice(J, {target}, max_order)
    return [s.group for s in subs]
