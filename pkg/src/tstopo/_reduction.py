"""Numba kernels for Vietoris-Rips persistence of dense distance matrices.

Degree 0 is Kruskal union-find over the sorted edge list. Degree 1 reduces
the edge/triangle coboundary matrix column by column, processing non-tree
edges in decreasing filtration order (tree-edge columns are cleared by the
degree-0 pairing). Cofacet columns are enumerated lazily from the distance
matrix; a column is materialized and stored only when it collides with an
earlier pivot, so the common case costs one O(n) scan and no memory. Columns
that reduce with zero additions equal their raw cofacet list and are
re-enumerated on demand instead of stored.

Pivots live at the minimal (filtration, lexicographic-key) cofacet; every
column addition cancels the current pivot and strictly raises it, which is
the standard termination argument for the reduction.
"""

import numpy as np
from numba import njit, types
from numba.typed import Dict, List

# Heap entries are (filtration, triangle key) pairs kept in two parallel
# arrays; triangle key = (a*n + b)*n + c for sorted vertices a < b < c, so
# key order is lexicographic vertex order.


@njit(cache=True)
def _tri_key(i, j, k, n):
    if k < i:
        return (k * n + i) * n + j
    if k < j:
        return (i * n + k) * n + j
    return (i * n + j) * n + k


@njit(cache=True)
def _heap_push(hf, hk, size, f, k):
    if size >= hf.shape[0]:
        nf = np.empty(2 * hf.shape[0], dtype=np.float64)
        nk = np.empty(2 * hk.shape[0], dtype=np.int64)
        nf[:size] = hf[:size]
        nk[:size] = hk[:size]
        hf, hk = nf, nk
    pos = size
    hf[pos] = f
    hk[pos] = k
    while pos > 0:
        up = (pos - 1) >> 1
        if (hf[up] > hf[pos]) or (hf[up] == hf[pos] and hk[up] > hk[pos]):
            hf[up], hf[pos] = hf[pos], hf[up]
            hk[up], hk[pos] = hk[pos], hk[up]
            pos = up
        else:
            break
    return hf, hk, size + 1


@njit(cache=True)
def _heap_pop(hf, hk, size):
    size -= 1
    hf[0] = hf[size]
    hk[0] = hk[size]
    pos = 0
    while True:
        left = 2 * pos + 1
        if left >= size:
            break
        best = left
        right = left + 1
        if right < size and (
            (hf[right] < hf[left]) or (hf[right] == hf[left] and hk[right] < hk[left])
        ):
            best = right
        if (hf[best] < hf[pos]) or (hf[best] == hf[pos] and hk[best] < hk[pos]):
            hf[pos], hf[best] = hf[best], hf[pos]
            hk[pos], hk[best] = hk[best], hk[pos]
            pos = best
        else:
            break
    return size


@njit(cache=True)
def _heap_pivot(hf, hk, size):
    """Pop entries mod 2 until a surviving minimum remains.

    Returns (filt, key, size, found); the surviving pivot is popped too.
    """
    while size > 0:
        f0 = hf[0]
        k0 = hk[0]
        count = 0
        while size > 0 and hk[0] == k0:
            size = _heap_pop(hf, hk, size)
            count += 1
        if count & 1:
            return f0, k0, size, True
    return 0.0, np.int64(-1), size, False


@njit(cache=True)
def _push_cofacets(hf, hk, size, dist, i, j, w, threshold, n):
    """Push the raw cofacet column of edge (i, j) with weight w."""
    for k in range(n):
        if k == i or k == j:
            continue
        dik = dist[i, k]
        djk = dist[j, k]
        f = dik if dik > djk else djk
        if f > threshold:
            continue
        if f < w:
            f = w
        hf, hk, size = _heap_push(hf, hk, size, f, _tri_key(i, j, k, n))
    return hf, hk, size


@njit(cache=True)
def _find(parent, a):
    root = a
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        parent[a], a = root, parent[a]
    return root


@njit(cache=True)
def kruskal_deaths(n, ei, ej, ew):
    """Union-find over edges sorted ascending; returns (deaths, is_tree).

    Finite degree-0 deaths are exactly the weights of the union (tree) edges.
    """
    parent = np.arange(n)
    m = ei.shape[0]
    deaths = np.empty(n - 1 if n > 0 else 0, dtype=np.float64)
    is_tree = np.zeros(m, dtype=np.bool_)
    count = 0
    for e in range(m):
        ri = _find(parent, ei[e])
        rj = _find(parent, ej[e])
        if ri != rj:
            parent[rj] = ri
            deaths[count] = ew[e]
            count += 1
            is_tree[e] = True
            if count == n - 1:
                break
    return deaths[:count], is_tree


@njit(cache=True)
def h1_pairs(dist, ei, ej, ew, is_tree, threshold):
    """Degree-1 persistence pairs of the Rips filtration capped at threshold.

    Returns (births, deaths) of positive-persistence finite pairs plus the
    births of essential classes (cycles never filled below the threshold).
    """
    n = dist.shape[0]
    m = ei.shape[0]

    pivot_owner = Dict.empty(types.int64, types.int64)
    pivot_col = Dict.empty(types.int64, types.int64)
    stored_f = List.empty_list(types.float64[:])
    stored_k = List.empty_list(types.int64[:])

    out_b = np.empty(m, dtype=np.float64)
    out_d = np.empty(m, dtype=np.float64)
    n_out = 0
    ess = np.empty(m, dtype=np.float64)
    n_ess = 0

    hf = np.empty(256, dtype=np.float64)
    hk = np.empty(256, dtype=np.int64)

    for idx in range(m - 1, -1, -1):
        if is_tree[idx]:
            continue
        i = ei[idx]
        j = ej[idx]
        w = ew[idx]

        # Fast path: scan for the minimal cofacet without materializing.
        # Ascending k yields ascending triangle keys, and no cofacet can sit
        # below the edge's own filtration value, so the first witness with
        # max(d_ik, d_jk) <= w is the minimal cofacet and the scan can stop.
        best_f = np.inf
        best_k = np.int64(-1)
        for k in range(n):
            if k == i or k == j:
                continue
            dik = dist[i, k]
            djk = dist[j, k]
            f = dik if dik > djk else djk
            if f > threshold:
                continue
            if f <= w:
                best_f = w
                best_k = _tri_key(i, j, k, n)
                break
            kk = _tri_key(i, j, k, n)
            if f < best_f or (f == best_f and kk < best_k):
                best_f = f
                best_k = kk
        if best_k == -1:
            ess[n_ess] = w
            n_ess += 1
            continue
        if best_k not in pivot_owner:
            pivot_owner[best_k] = idx
            pivot_col[best_k] = -1
            if best_f > w:
                out_b[n_out] = w
                out_d[n_out] = best_f
                n_out += 1
            continue

        # Collision: materialize the column and reduce against owners.
        size = 0
        hf, hk, size = _push_cofacets(hf, hk, size, dist, i, j, w, threshold, n)
        while True:
            f0, k0, size, found = _heap_pivot(hf, hk, size)
            if not found:
                ess[n_ess] = w
                n_ess += 1
                break
            if k0 not in pivot_owner:
                pivot_owner[k0] = idx
                if f0 > w:
                    out_b[n_out] = w
                    out_d[n_out] = f0
                    n_out += 1
                # Freeze the reduced column (pivot first; rest pops sorted).
                col_f = np.empty(size + 1, dtype=np.float64)
                col_k = np.empty(size + 1, dtype=np.int64)
                col_f[0] = f0
                col_k[0] = k0
                length = 1
                while True:
                    f1, k1, size, more = _heap_pivot(hf, hk, size)
                    if not more:
                        break
                    col_f[length] = f1
                    col_k[length] = k1
                    length += 1
                stored_f.append(col_f[:length].copy())
                stored_k.append(col_k[:length].copy())
                pivot_col[k0] = len(stored_f) - 1
                break
            owner = pivot_owner[k0]
            col_idx = pivot_col[k0]
            # Put the held pivot back; it cancels against the owner's pivot.
            hf, hk, size = _heap_push(hf, hk, size, f0, k0)
            if col_idx >= 0:
                cf = stored_f[col_idx]
                ck = stored_k[col_idx]
                for t in range(cf.shape[0]):
                    hf, hk, size = _heap_push(hf, hk, size, cf[t], ck[t])
            else:
                hf, hk, size = _push_cofacets(
                    hf, hk, size, dist, ei[owner], ej[owner], ew[owner], threshold, n
                )

    return out_b[:n_out], out_d[:n_out], ess[:n_ess]
