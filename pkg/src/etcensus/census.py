"""Census pipelines for connected edge-transitive graphs.

Bipartite graphs come from worthy ones by blow-up.  Worthy bipartite graphs
with parts of sizes k and m are orbit graphs of a transitive group of degree k
acting on the cosets of a core-free subgroup of index m.  Non-bipartite
edge-transitive graphs are vertex-transitive and are taken from the orbital
graphs of transitive groups of degree n.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .graph import (CanonicalForm, ClassificationFlags, Graph, blow_up, canonical_form,
                    classify, from_graph6, is_connected, is_worthy, to_graph6)
from .permgroup import PermGroup, coset_action
from .subgroups import corefree_subgroups_of_index
from .transcat import Catalogue, CatalogueEntry

__all__ = [
    "CensusRecord",
    "CensusTable",
    "TableRow",
    "CapacityError",
    "enumerate_bipartite_worthy",
    "blowup_closure",
    "bipartite_census",
    "enumerate_vertex_transitive",
    "full_census",
    "tabulate",
]


class CapacityError(Exception):
    """A required catalogue degree is beyond what is available."""

    def __init__(self, message: str, blocking=None):
        super().__init__(message)
        self.blocking = blocking


@dataclass
class CensusRecord:
    graph: Graph
    canonical: CanonicalForm
    flags: ClassificationFlags
    provenance: str = ""

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def graph6(self) -> str:
        return to_graph6(self.graph)


@dataclass
class TableRow:
    tot: int = 0
    reg: int = 0
    bpte: int = 0
    vt: int = 0
    at: int = 0
    wthy: int = 0

    def as_tuple(self) -> tuple:
        return (self.tot, self.reg, self.bpte, self.vt, self.at, self.wthy)


@dataclass
class CensusTable:
    rows: dict = field(default_factory=dict)

    COLUMNS = ("Tot", "Reg", "Bpte", "VT", "AT", "Wthy")

    def row(self, n: int) -> TableRow:
        return self.rows.get(n, TableRow())

    def to_csv(self) -> str:
        lines = ["n," + ",".join(self.COLUMNS)]
        for n in sorted(self.rows):
            lines.append(f"{n}," + ",".join(str(x) for x in self.rows[n].as_tuple()))
        return "\n".join(lines) + "\n"


def _record(X: Graph, provenance: str) -> CensusRecord:
    return CensusRecord(X, canonical_form(X), classify(X), provenance)


# -- worthy bipartite ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _corefree_cached(degree: int, gens: tuple, order: int, m: int) -> tuple:
    G = PermGroup(degree, gens, order=order)
    return tuple(tuple(h.images for h in H.generators) for H in corefree_subgroups_of_index(G, m))


def _pair_orbit(gens: list[tuple], u: int, w: int) -> set:
    seen = {(u, w)}
    queue = [(u, w)]
    for a, b in queue:
        for g in gens:
            e = (g[a], g[b])
            if e not in seen:
                seen.add(e)
                queue.append(e)
    return seen


def _worthy_from_entry(entry: CatalogueEntry, m: int) -> list[tuple[Graph, str]]:
    """Candidate graphs (before global dedup) for one catalogue group."""
    k = entry.degree
    G = entry.group()
    out = []
    gens_key = tuple(g.images for g in entry.generators)
    for hi, hgens in enumerate(_corefree_cached(k, gens_key, entry.order, m)):
        H = PermGroup(k, hgens)
        act = coset_action(G, H)
        gens = [tuple(g.images) + tuple(k + x for x in img.images)
                for g, img in zip(entry.generators, act.images_of_generators)]
        big = PermGroup(k + m, gens, order=entry.order)
        order = entry.order
        Gu = big.stabilizer(0)
        orbits = [o for o in Gu.orbits() if o[0] >= k]
        parts = (range(k), range(k, k + m))
        tag = f"G{entry.degree}.{entry.index} H{hi + 1}"
        for O in orbits:
            w = O[0]
            Gw = big.stabilizer(w)
            J = PermGroup(k + m, [g.images for g in Gu.generators] + [g.images for g in Gw.generators])
            if J.order() != order:
                continue
            X = Graph(k + m, _pair_orbit(gens, 0, w), parts)
            if is_connected(X) and is_worthy(X):
                out.append((X, f"{tag} orbit w={w - k}"))
        for O1, O2 in itertools.combinations(orbits, 2):
            if len(O1) != len(O2):
                continue
            edges = _pair_orbit(gens, 0, O1[0]) | _pair_orbit(gens, 0, O2[0])
            X = Graph(k + m, edges, parts)
            if is_connected(X) and is_worthy(X) and classify(X).edge_transitive:
                out.append((X, f"{tag} orbits w={O1[0] - k},{O2[0] - k}"))
    return out


def _worthy_task(args):
    entry, m = args
    return [(to_graph6(X), X.bipartition, prov) for X, prov in _worthy_from_entry(entry, m)]


def _run_tasks(fn, tasks, workers: int | None):
    if workers is None or workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, tasks))


def enumerate_bipartite_worthy(k: int, m: int, cat: Catalogue, *,
                               workers: int | None = None, swap: bool = True) -> list[CensusRecord]:
    """Connected worthy edge-transitive bipartite graphs with parts of sizes k and m.

    Groups of degree min(k, m) are used unless ``swap`` is false, in which case
    degree-k groups act on cosets of index m as given.
    """
    if k < 1 or m < 1:
        raise ValueError("part sizes must be positive")
    if swap and k > m:
        k, m = m, k
    if k > cat.max_degree:
        raise CapacityError(f"parts ({k},{m}) need transitive groups of degree {k}, "
                            f"catalogue stops at {cat.max_degree}", blocking=(k, m))
    tasks = [(e, m) for e in cat.degree(k)]
    seen: dict[CanonicalForm, CensusRecord] = {}
    for res in _run_tasks(_worthy_task, tasks, workers):
        for g6, parts, prov in res:
            X = Graph.from_rows(from_graph6(g6).rows, parts)
            cf = canonical_form(X)
            if cf not in seen:
                seen[cf] = _record(X, prov)
    return sorted(seen.values(), key=lambda r: r.canonical.data)


# -- blow-ups -----------------------------------------------------------------------


def _swap_parts(X: Graph) -> Graph:
    U, W = X.bipartition
    return X.with_bipartition(W, U)


def blowup_closure(worthy: list[CensusRecord], n: int) -> list[CensusRecord]:
    """All blow-ups of order n of the given worthy bipartite graphs, deduplicated."""
    seen: dict[CanonicalForm, CensusRecord] = {}
    for rec in worthy:
        Y = rec.graph
        if Y.bipartition is None:
            raise ValueError("worthy records must carry their parts")
        for Z in (Y, _swap_parts(Y)):
            ku, kw = len(Z.bipartition[0]), len(Z.bipartition[1])
            for a in range(1, n // ku + 1):
                rest = n - a * ku
                if rest <= 0 or rest % kw:
                    continue
                b = rest // kw
                X = blow_up(Z, a, b)
                cf = canonical_form(X)
                if cf not in seen:
                    prov = rec.provenance if (a, b) == (1, 1) else \
                        f"({a},{b})-blow-up of {rec.graph6} [{rec.provenance}]"
                    seen[cf] = _record(X, prov)
    return sorted(seen.values(), key=lambda r: r.canonical.data)


def _part_pairs(n: int) -> list[tuple[int, int]]:
    """Part sizes (k', m') with k' <= m' that can blow up to order n."""
    out = []
    for kq in range(1, n // 2 + 1):
        for mq in range(kq, n - kq + 1):
            if any((n - a * kq) > 0 and (n - a * kq) % mq == 0 for a in range(1, n // kq + 1)):
                out.append((kq, mq))
    return out


def bipartite_census(n: int, cat: Catalogue, *, workers: int | None = None,
                     worthy_cache: dict | None = None) -> list[CensusRecord]:
    """Connected bipartite edge-transitive graphs of order n."""
    pairs = _part_pairs(n)
    blocked = [p for p in pairs if p[0] > cat.max_degree]
    if blocked:
        raise CapacityError(f"bipartite census of order {n} needs parts {blocked[0]}, "
                            f"catalogue stops at degree {cat.max_degree}", blocking=blocked[0])
    worthy = []
    for p in pairs:
        if worthy_cache is not None and p in worthy_cache:
            recs = worthy_cache[p]
        else:
            recs = enumerate_bipartite_worthy(p[0], p[1], cat, workers=workers)
            if worthy_cache is not None:
                worthy_cache[p] = recs
        worthy.extend(recs)
    return blowup_closure(worthy, n)


# -- vertex-transitive ----------------------------------------------------------------


def _vt_from_entry(entry: CatalogueEntry) -> list[tuple[Graph, str]]:
    n = entry.degree
    if n == 1:
        return [(Graph(1), f"G1.{entry.index} empty")]
    G = entry.group()
    Gv = G.stabilizer(0)
    sub = [o for o in Gv.orbits() if o != [0]]
    trans = G.chain.transversals[0] if G.chain.base and G.chain.base[0] == 0 else \
        G.with_base([0]).chain.transversals[0]
    where = {}
    for i, o in enumerate(sub):
        for x in o:
            where[x] = i
    # pair each suborbit with the one holding v^(t^-1) where v^t = w
    classes: list[list[int]] = []
    done = set()
    for i, o in enumerate(sub):
        if i in done:
            continue
        t = trans[o[0]]
        tinv = [0] * n
        for a, b in enumerate(t):
            tinv[b] = a
        j = where[tinv[0]]
        done.update({i, j})
        classes.append(sorted(set(o) | set(sub[j])))
    out = []
    tr = [trans[x] for x in range(n)]
    for r in range(1, len(classes) + 1):
        for combo in itertools.combinations(range(len(classes)), r):
            delta = [w for c in combo for w in classes[c]]
            edges = set()
            for x in range(n):
                t = tr[x]
                for w in delta:
                    y = t[w]
                    edges.add((min(x, y), max(x, y)))
            X = Graph(n, sorted(edges))
            if is_connected(X):
                out.append((X, f"G{n}.{entry.index} classes {list(combo)}"))
    return out


def _vt_task(entry):
    return [(to_graph6(X), prov) for X, prov in _vt_from_entry(entry)]


def enumerate_vertex_transitive(n: int, cat: Catalogue, *,
                                workers: int | None = None) -> list[CensusRecord]:
    """Connected vertex-transitive graphs of order n from orbital graphs."""
    if n > cat.max_degree:
        raise CapacityError(f"vertex-transitive census of order {n} needs degree-{n} groups, "
                            f"catalogue stops at {cat.max_degree}", blocking=(n, n))
    seen: dict[CanonicalForm, CensusRecord] = {}
    for res in _run_tasks(_vt_task, list(cat.degree(n)), workers):
        for g6, prov in res:
            X = from_graph6(g6)
            cf = canonical_form(X)
            if cf not in seen:
                seen[cf] = _record(X, prov)
    return sorted(seen.values(), key=lambda r: r.canonical.data)


def full_census(n: int, cat: Catalogue, *, workers: int | None = None,
                worthy_cache: dict | None = None) -> list[CensusRecord]:
    """All connected edge-transitive graphs of order n."""
    bip = bipartite_census(n, cat, workers=workers, worthy_cache=worthy_cache)
    vt = enumerate_vertex_transitive(n, cat, workers=workers)
    nonbip = [r for r in vt if r.flags.edge_transitive and not r.flags.bipartite]
    out = {r.canonical: r for r in nonbip}
    for r in bip:
        out.setdefault(r.canonical, r)
    return sorted(out.values(), key=lambda r: r.canonical.data)


def tabulate(records_by_n: dict) -> CensusTable:
    table = CensusTable()
    for n, records in records_by_n.items():
        row = TableRow()
        for r in records:
            f = r.flags
            row.tot += 1
            row.reg += f.regular
            row.bpte += f.bipartite
            row.vt += f.vertex_transitive
            row.at += f.arc_transitive
            row.wthy += f.worthy
        table.rows[n] = row
    return table
