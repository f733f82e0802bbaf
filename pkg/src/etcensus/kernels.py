"""Hot loops: partition refinement, canonical search, and graph generation.

All functions are written in the subset of Python that numba compiles, and
only touch numpy arrays and scalars.  With ``ETCENSUS_NO_NUMBA=1`` they run as
ordinary Python, which is slow but gives identical results.

Graphs are passed in two forms at once: CSR neighbour lists (``indptr``,
``indices``) for refinement, and a dense ``uint8`` matrix for comparing
relabelled adjacency.
"""

import numpy as np

from ._accel import jit

_HMASK = (1 << 40) - 1


@jit
def _mix(h, x):
    return ((h * 1000003) ^ (x + 0x9E3779B1)) & _HMASK


@jit
def refine(n, indptr, indices, lab, cend, stack, sp, inq, count):
    """Refine the ordered partition (lab, cend) to the coarsest equitable one.

    ``stack[:sp]`` holds the starts of splitter cells.  Returns a hash of the
    refinement trace, which is invariant under relabelling.
    """
    h = 17
    while sp > 0:
        sp -= 1
        sw = stack[sp]
        inq[sw] = False
        ew = cend[sw]
        for p in range(sw, ew):
            w = lab[p]
            for t in range(indptr[w], indptr[w + 1]):
                count[indices[t]] += 1
        s = 0
        while s < n:
            e = cend[s]
            if e - s > 1:
                c0 = count[lab[s]]
                same = True
                for p in range(s + 1, e):
                    if count[lab[p]] != c0:
                        same = False
                        break
                if not same:
                    m = e - s
                    keys = np.empty(m, dtype=np.int64)
                    verts = np.empty(m, dtype=np.int64)
                    for p in range(m):
                        verts[p] = lab[s + p]
                        keys[p] = count[verts[p]]
                    order = np.argsort(keys, kind="mergesort")
                    for p in range(m):
                        lab[s + p] = verts[order[p]]
                    was_queued = inq[s]
                    h = _mix(h, s)
                    # fragments
                    fs = s
                    big_start = s
                    big_size = 0
                    while fs < e:
                        kv = count[lab[fs]]
                        fe = fs + 1
                        while fe < e and count[lab[fe]] == kv:
                            fe += 1
                        cend[fs] = fe
                        h = _mix(h, kv)
                        h = _mix(h, fe - fs)
                        if fe - fs > big_size:
                            big_size = fe - fs
                            big_start = fs
                        fs = fe
                    fs = s
                    while fs < e:
                        fe = cend[fs]
                        if was_queued:
                            if fs != s and not inq[fs]:
                                inq[fs] = True
                                stack[sp] = fs
                                sp += 1
                        elif fs != big_start:
                            inq[fs] = True
                            stack[sp] = fs
                            sp += 1
                        fs = fe
            s = e
        for p in range(sw, ew):
            w = lab[p]
            for t in range(indptr[w], indptr[w + 1]):
                count[indices[t]] = 0
        h = _mix(h, ew - sw)
    ncells = 0
    s = 0
    while s < n:
        ncells += 1
        s = cend[s]
    h = _mix(h, ncells)
    return h, ncells


@jit
def _compare_leaves(n, adj, lab_a, lab_b):
    """Lexicographic comparison of relabelled upper triangles (-1, 0, 1)."""
    for j in range(1, n):
        aj = lab_a[j]
        bj = lab_b[j]
        for i in range(j):
            x = adj[lab_a[i], aj]
            y = adj[lab_b[i], bj]
            if x != y:
                return -1 if x < y else 1
    return 0


@jit
def _orbit_labels(n, gens, ngens, fixed, nfixed):
    """Union-find orbit labels of the generators fixing ``fixed[:nfixed]``."""
    parent = np.arange(n)
    for g in range(ngens):
        ok = True
        for k in range(nfixed):
            if gens[g, fixed[k]] != fixed[k]:
                ok = False
                break
        if not ok:
            continue
        for i in range(n):
            a = i
            while parent[a] != a:
                a = parent[a]
            b = gens[g, i]
            while parent[b] != b:
                b = parent[b]
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    for i in range(n):
        a = i
        while parent[a] != a:
            a = parent[a]
        parent[i] = a
    return parent


@jit
def canonical_search(n, indptr, indices, adj, colors):
    """Canonical labelling and automorphism generators of a coloured graph.

    Returns ``(canon, gens, ngens, base, nbase, orbit_sizes)`` where
    ``canon[i]`` is the vertex placed at position i, ``gens[:ngens]`` are
    automorphisms, and the automorphism group order is the product of
    ``orbit_sizes[:nbase]``.
    """
    lab0 = np.argsort(colors, kind="mergesort").astype(np.int64)
    cend0 = np.zeros(n, dtype=np.int64)
    stack = np.zeros(n + 1, dtype=np.int64)
    inq = np.zeros(n, dtype=np.bool_)
    count = np.zeros(n, dtype=np.int64)
    sp = 0
    s = 0
    h0 = 5
    while s < n:
        e = s + 1
        while e < n and colors[lab0[e]] == colors[lab0[s]]:
            e += 1
        cend0[s] = e
        stack[sp] = s
        inq[s] = True
        sp += 1
        h0 = _mix(h0, e - s)
        s = e
    h, ncells = refine(n, indptr, indices, lab0, cend0, stack, sp, inq, count)
    h0 = _mix(h0, h)

    cap = 2 * n + 4
    gens = np.zeros((cap, n), dtype=np.int64)
    ngens = 0
    base = np.zeros(n, dtype=np.int64)
    sizes = np.ones(n, dtype=np.int64)
    if ncells == n:
        return lab0, gens, 0, base, 0, sizes

    LAB = np.zeros((n + 1, n), dtype=np.int64)
    CEND = np.zeros((n + 1, n), dtype=np.int64)
    LAB[0, :] = lab0
    CEND[0, :] = cend0
    tstart = np.zeros(n + 1, dtype=np.int64)
    tend = np.zeros(n + 1, dtype=np.int64)
    nxt = np.zeros(n + 1, dtype=np.int64)
    chosen = np.zeros(n + 1, dtype=np.int64)
    inv_cur = np.zeros(n + 2, dtype=np.int64)
    eqf = np.zeros(n + 2, dtype=np.bool_)
    cmpb = np.zeros(n + 2, dtype=np.int64)
    tried = np.zeros((n + 1, n), dtype=np.bool_)

    first_lab = np.zeros(n, dtype=np.int64)
    best_lab = np.zeros(n, dtype=np.int64)
    first_inv = np.zeros(n + 2, dtype=np.int64)
    best_inv = np.zeros(n + 2, dtype=np.int64)
    first_chosen = np.zeros(n + 1, dtype=np.int64)
    best_chosen = np.zeros(n + 1, dtype=np.int64)
    first_depth = -1

    inv_cur[0] = h0
    eqf[0] = True
    cmpb[0] = 0

    # target cell: first non-singleton
    s = 0
    while CEND[0, s] - s == 1:
        s = CEND[0, s]
    tstart[0] = s
    tend[0] = CEND[0, s]
    nxt[0] = 0

    L = 0
    while L >= 0:
        # pick the next child of the node at level L
        s = tstart[L]
        e = tend[L]
        k = nxt[L]
        onfirst = first_depth >= 0 and L < first_depth
        if onfirst:
            for j in range(L):
                if chosen[j] != first_chosen[j]:
                    onfirst = False
                    break
        v = -1
        vpos = -1
        while k < e - s:
            cand = LAB[L, s + k]
            k += 1
            if onfirst and ngens > 0:
                orb = _orbit_labels(n, gens, ngens, first_chosen, L)
                skip = False
                for u in range(n):
                    if tried[L, u] and orb[u] == orb[cand]:
                        skip = True
                        break
                if skip:
                    continue
            v = cand
            vpos = s + k - 1
            break
        nxt[L] = k
        if v < 0:
            L -= 1
            continue
        if onfirst or first_depth < 0:
            tried[L, v] = True
        chosen[L] = v
        # child partition
        for i in range(n):
            LAB[L + 1, i] = LAB[L, i]
            CEND[L + 1, i] = CEND[L, i]
        LAB[L + 1, vpos] = LAB[L + 1, s]
        LAB[L + 1, s] = v
        CEND[L + 1, s] = s + 1
        CEND[L + 1, s + 1] = e
        stack[0] = s
        inq[:] = False
        inq[s] = True
        hh, ncells = refine(n, indptr, indices, LAB[L + 1], CEND[L + 1], stack, 1, inq, count)
        inv_cur[L + 1] = hh
        if first_depth < 0:
            eqf[L + 1] = True
            cmpb[L + 1] = 0
        else:
            eqf[L + 1] = eqf[L] and hh == first_inv[L + 1]
            if cmpb[L] != 0:
                cmpb[L + 1] = cmpb[L]
            elif hh > best_inv[L + 1]:
                cmpb[L + 1] = 1
            elif hh < best_inv[L + 1]:
                cmpb[L + 1] = -1
            else:
                cmpb[L + 1] = 0
            if (not eqf[L + 1]) and cmpb[L + 1] < 0:
                continue
        if ncells < n:
            L += 1
            t = 0
            while CEND[L, t] - t == 1:
                t = CEND[L, t]
            tstart[L] = t
            tend[L] = CEND[L, t]
            nxt[L] = 0
            for u in range(n):
                tried[L, u] = False
            continue
        # leaf at depth L + 1
        leaf = LAB[L + 1]
        depth = L + 1
        if first_depth < 0:
            first_depth = depth
            for i in range(n):
                first_lab[i] = leaf[i]
                best_lab[i] = leaf[i]
            for j in range(depth + 1):
                first_inv[j] = inv_cur[j]
                best_inv[j] = inv_cur[j]
            for j in range(depth):
                first_chosen[j] = chosen[j]
                best_chosen[j] = chosen[j]
            continue
        if eqf[depth] and depth == first_depth and _compare_leaves(n, adj, leaf, first_lab) == 0:
            if ngens == cap:
                bigger = np.zeros((2 * cap, n), dtype=np.int64)
                bigger[:cap] = gens
                gens = bigger
                cap = 2 * cap
            for i in range(n):
                gens[ngens, first_lab[i]] = leaf[i]
            ngens += 1
            j = 0
            while j < depth and chosen[j] == first_chosen[j]:
                j += 1
            L = j
            continue
        newbest = False
        if cmpb[depth] > 0:
            newbest = True
        elif cmpb[depth] == 0:
            c = _compare_leaves(n, adj, leaf, best_lab)
            if c < 0:
                newbest = True
            elif c == 0:
                if ngens == cap:
                    bigger = np.zeros((2 * cap, n), dtype=np.int64)
                    bigger[:cap] = gens
                    gens = bigger
                    cap = 2 * cap
                for i in range(n):
                    gens[ngens, best_lab[i]] = leaf[i]
                ngens += 1
                j = 0
                while j < depth and chosen[j] == best_chosen[j]:
                    j += 1
                L = j
                continue
        if newbest:
            for i in range(n):
                best_lab[i] = leaf[i]
            for j in range(depth + 1):
                best_inv[j] = inv_cur[j]
                cmpb[j] = 0
            for j in range(depth):
                best_chosen[j] = chosen[j]

    nbase = first_depth
    for lev in range(nbase):
        base[lev] = first_chosen[lev]
        orb = _orbit_labels(n, gens, ngens, first_chosen, lev)
        c = 0
        for u in range(n):
            if orb[u] == orb[first_chosen[lev]]:
                c += 1
        sizes[lev] = c
    return best_lab, gens[:ngens].copy(), ngens, base, nbase, sizes


# -- element-table arithmetic -----------------------------------------------------


@jit
def lehmer_rank(A):
    """Lexicographic rank of each row of A among all permutations."""
    N, n = A.shape
    out = np.empty(N, dtype=np.int64)
    for r in range(N):
        acc = 0
        for i in range(n):
            c = 0
            ai = A[r, i]
            for j in range(i + 1, n):
                if A[r, j] < ai:
                    c += 1
            acc = acc * (n - i) + c
        out[r] = acc
    return out


@jit
def conj_one_by_rows(E, Einv, h, X):
    """Rows ``x^-1 h x`` for x = E[X[r]] (apply x^-1, then h, then x)."""
    m = X.shape[0]
    n = E.shape[1]
    out = np.empty((m, n), dtype=E.dtype)
    for r in range(m):
        x = X[r]
        for i in range(n):
            out[r, i] = E[x, h[Einv[x, i]]]
    return out


@jit
def conj_rows_by_one(E, Einv, Hs, x):
    """Rows ``x^-1 h x`` for h = E[Hs[r]]."""
    m = Hs.shape[0]
    n = E.shape[1]
    out = np.empty((m, n), dtype=E.dtype)
    for r in range(m):
        hr = Hs[r]
        for i in range(n):
            out[r, i] = E[x, E[hr, Einv[x, i]]]
    return out


@jit
def compose_rows(P, Q):
    """Row-wise ``P * Q`` (apply P then Q)."""
    m, n = P.shape
    out = np.empty((m, n), dtype=P.dtype)
    for r in range(m):
        for i in range(n):
            out[r, i] = Q[r, P[r, i]]
    return out


# -- exhaustive generation ---------------------------------------------------------


@jit
def rows_to_arrays(n, rows):
    """CSR lists and dense matrix of a graph given by bitset rows."""
    adj = np.zeros((n, n), dtype=np.uint8)
    indptr = np.zeros(n + 1, dtype=np.int64)
    tot = 0
    for i in range(n):
        r = rows[i]
        for j in range(n):
            if (r >> j) & 1:
                adj[i, j] = 1
                tot += 1
        indptr[i + 1] = tot
    indices = np.zeros(tot, dtype=np.int64)
    k = 0
    for i in range(n):
        for j in range(n):
            if adj[i, j]:
                indices[k] = j
                k += 1
    return indptr, indices, adj


@jit
def _connected_without(n, rows, v):
    full = ((1 << n) - 1) & ~(1 << v)
    if full == 0:
        return True
    start = 0 if v != 0 else 1
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for i in range(n):
            if (frontier >> i) & 1:
                nxt |= rows[i]
        nxt &= full
        frontier = nxt & ~seen
        seen |= nxt
    return seen == full


@jit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@jit
def may_be_edge_transitive(n, rows):
    """Necessary condition: at most two degrees, and if two, each class independent."""
    d1 = -1
    d2 = -1
    for i in range(n):
        d = _popcount(rows[i])
        if d == d1 or d == d2:
            continue
        if d1 < 0:
            d1 = d
        elif d2 < 0:
            d2 = d
        else:
            return False
    if d2 < 0:
        return True
    m1 = 0
    for i in range(n):
        if _popcount(rows[i]) == d1:
            m1 |= 1 << i
    full = (1 << n) - 1
    m2 = full & ~m1
    for i in range(n):
        own = m1 if (m1 >> i) & 1 else m2
        if rows[i] & own:
            return False
    return True


@jit
def edge_orbit_count(n, rows, gens, ngens):
    eid = -np.ones((n, n), dtype=np.int64)
    m = 0
    for i in range(n):
        for j in range(i + 1, n):
            if (rows[i] >> j) & 1:
                eid[i, j] = m
                eid[j, i] = m
                m += 1
    if m == 0:
        return 0
    parent = np.arange(m)
    for g in range(ngens):
        for i in range(n):
            for j in range(i + 1, n):
                a = eid[i, j]
                if a < 0:
                    continue
                b = eid[gens[g, i], gens[g, j]]
                while parent[a] != a:
                    a = parent[a]
                while parent[b] != b:
                    b = parent[b]
                if a != b:
                    if a < b:
                        parent[b] = a
                    else:
                        parent[a] = b
    c = 0
    for e in range(m):
        if parent[e] == e:
            c += 1
    return c


@jit
def _augment_one(n, prow, out, cnt, only_et):
    """Children of one connected parent on n vertices; appends rows to ``out``."""
    indptr, indices, adj = rows_to_arrays(n, prow)
    colors = np.zeros(n, dtype=np.int64)
    lab, gens, ngens, base, nbase, sizes = canonical_search(n, indptr, indices, adj, colors)
    nm = 1 << n
    parent = np.arange(nm)
    for g in range(ngens):
        for s in range(1, nm):
            t = 0
            for i in range(n):
                if (s >> i) & 1:
                    t |= 1 << gens[g, i]
            a = s
            while parent[a] != a:
                a = parent[a]
            b = t
            while parent[b] != b:
                b = parent[b]
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    N1 = n + 1
    crow = np.zeros(N1, dtype=np.int64)
    deg = np.zeros(N1, dtype=np.int64)
    key = np.zeros(N1, dtype=np.int64)
    cand = np.zeros(N1, dtype=np.bool_)
    ccol = np.zeros(N1, dtype=np.int64)
    for s in range(1, nm):
        if parent[s] != s:
            continue
        for i in range(n):
            crow[i] = prow[i] | (((s >> i) & 1) << n)
        crow[n] = s
        for i in range(N1):
            deg[i] = _popcount(crow[i])
        best = -1
        for i in range(N1):
            sd = 0
            r = crow[i]
            for j in range(N1):
                if (r >> j) & 1:
                    sd += deg[j]
            key[i] = deg[i] * 4096 + sd
        if only_et and not may_be_edge_transitive(N1, crow):
            continue
        # the new vertex is never a cut vertex
        for i in range(N1):
            cand[i] = False
            if key[i] >= key[n]:
                if i == n or _connected_without(N1, crow, i):
                    cand[i] = True
                    if key[i] > best:
                        best = key[i]
        if key[n] < best:
            continue
        ncand = 0
        for i in range(N1):
            if cand[i] and key[i] == best:
                ncand += 1
                ccol[i] = 1
            else:
                ccol[i] = 0
        accept = ncand == 1
        cgens = np.zeros((0, N1), dtype=np.int64)
        cng = -1
        if not accept:
            ip, ix, am = rows_to_arrays(N1, crow)
            clab, cgens, cng, cb, cnb, cs = canonical_search(N1, ip, ix, am, ccol)
            orb = _orbit_labels(N1, cgens, cng, cb, 0)
            accept = orb[n] == orb[clab[N1 - 1]]
        if not accept:
            continue
        if only_et:
            if cng < 0:
                ip, ix, am = rows_to_arrays(N1, crow)
                clab, cgens, cng, cb, cnb, cs = canonical_search(N1, ip, ix, am, ccol)
            if edge_orbit_count(N1, crow, cgens, cng) != 1:
                continue
        if cnt == out.shape[0]:
            bigger = np.zeros((2 * out.shape[0] + 16, N1), dtype=np.int64)
            bigger[:cnt] = out[:cnt]
            out = bigger
        out[cnt, :] = crow
        cnt += 1
    return out, cnt


@jit
def augment_batch(n, parents, only_et):
    """Accepted one-vertex extensions of each connected parent graph.

    With ``only_et`` the children are filtered down to the edge-transitive ones.
    """
    out = np.zeros((16, n + 1), dtype=np.int64)
    cnt = 0
    for p in range(parents.shape[0]):
        out, cnt = _augment_one(n, parents[p], out, cnt, only_et)
    return out[:cnt].copy()


@jit
def _is_max_canonical(n, adj):
    """True when no relabelling gives a larger column-order adjacency string."""
    if n <= 1:
        return True
    perm = np.zeros(n, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    nxt = np.zeros(n + 1, dtype=np.int64)
    lev = 0
    nxt[0] = 0
    while lev >= 0:
        if lev == n:
            lev -= 1
            used[perm[lev]] = False
            continue
        c = nxt[lev]
        while c < n and used[c]:
            c += 1
        if c >= n:
            lev -= 1
            if lev >= 0:
                used[perm[lev]] = False
            continue
        nxt[lev] = c + 1
        perm[lev] = c
        # compare column lev of the relabelled graph with the original
        cmp = 0
        for i in range(lev):
            b1 = adj[perm[i], c]
            b0 = adj[i, lev]
            if b1 != b0:
                cmp = 1 if b1 > b0 else -1
                break
        if cmp > 0:
            return False
        if cmp < 0:
            continue
        used[c] = True
        lev += 1
        if lev < n:
            nxt[lev] = 0
        else:
            lev -= 1
            used[perm[lev]] = False
    return True


@jit
def orderly_all_graphs(n):
    """Every graph on n vertices once, as max-canonical bitset rows."""
    npos = n * (n - 1) // 2
    pi = np.zeros(npos, dtype=np.int64)
    pj = np.zeros(npos, dtype=np.int64)
    p = 0
    for j in range(1, n):
        for i in range(j):
            pi[p] = i
            pj[p] = j
            p += 1
    out = np.zeros((64, n), dtype=np.int64)
    cnt = 0
    adj = np.zeros((n, n), dtype=np.uint8)
    # explicit DFS over (last position, next position to try)
    stack_pos = np.zeros(npos + 1, dtype=np.int64)
    stack_next = np.zeros(npos + 1, dtype=np.int64)
    depth = 0
    stack_pos[0] = -1
    stack_next[0] = 0
    # emit the empty graph
    out[0, :] = 0
    cnt = 1
    while depth >= 0:
        q = stack_next[depth]
        if q >= npos:
            if depth > 0:
                last = stack_pos[depth]
                adj[pi[last], pj[last]] = 0
                adj[pj[last], pi[last]] = 0
            depth -= 1
            continue
        stack_next[depth] = q + 1
        adj[pi[q], pj[q]] = 1
        adj[pj[q], pi[q]] = 1
        if _is_max_canonical(n, adj):
            if cnt == out.shape[0]:
                bigger = np.zeros((2 * cnt, n), dtype=np.int64)
                bigger[:cnt] = out[:cnt]
                out = bigger
            for i in range(n):
                r = 0
                for j in range(n):
                    if adj[i, j]:
                        r |= 1 << j
                out[cnt, i] = r
            cnt += 1
            depth += 1
            stack_pos[depth] = q
            stack_next[depth] = q + 1
        else:
            adj[pi[q], pj[q]] = 0
            adj[pj[q], pi[q]] = 0
    return out[:cnt].copy()
