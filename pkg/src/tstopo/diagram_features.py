"""Scalar features and distances of persistence diagrams.

The nine-feature summary of a degree-1 diagram: total and maximum
half-lifetime (Wasserstein/bottleneck distance to the diagonal), the four
polynomial birth/death/lifetime summaries of Adcock-Carlsson, lifetime
entropy, and the L1 norms of the Betti curve and first landscape.

Distances between diagrams allow diagonal projections, so diagrams of
different sizes are comparable: the bottleneck distance is found by binary
search over candidate radii with a bipartite-matching feasibility test, the
Wasserstein distance by an exact Hungarian assignment on the
diagonal-augmented square cost matrix.

All integrals (Betti curve, landscapes) are computed from breakpoints of the
piecewise-linear/step functions, not from a sampling grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np


def as_pairs(diagram) -> np.ndarray:
    """Coerce a PersistenceDiagram or array-like to an (m, 2) float array."""
    pairs = getattr(diagram, "pairs", diagram)
    arr = np.asarray(pairs, dtype=np.float64).reshape(-1, 2)
    if arr.size and np.any(arr[:, 0] > arr[:, 1]):
        raise ValueError("diagram pairs must satisfy birth <= death")
    return arr


def _finite_pairs(diagram) -> np.ndarray:
    arr = as_pairs(diagram)
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError("diagram contains infinite pairs; strip them upstream")
    return arr


@dataclass(frozen=True)
class TopologicalFeatureVector:
    """The nine diagram features, in fixed output order."""

    wasserstein_diag: float
    bottleneck_diag: float
    ac1: float
    ac2: float
    ac3: float
    ac4: float
    entropy: float
    betti_l1: float
    landscape1_l1: float

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in self.names()])


def wasserstein_to_diagonal(diagram) -> float:
    """Sum of half-lifetimes: W_1 distance from the diagram to the diagonal."""
    pairs = _finite_pairs(diagram)
    return math.fsum((d - b) / 2 for b, d in pairs)


def bottleneck_to_diagonal(diagram) -> float:
    """Max half-lifetime: bottleneck distance to the diagonal (0 if empty)."""
    pairs = _finite_pairs(diagram)
    if not pairs.size:
        return 0.0
    return float(np.max((pairs[:, 1] - pairs[:, 0]) / 2))


def adcock_carlsson(diagram) -> tuple[float, float, float, float]:
    """Polynomial diagram summaries (sum b*l, sum (dmax-d)*l, and degree-4 forms)."""
    pairs = _finite_pairs(diagram)
    if not pairs.size:
        return (0.0, 0.0, 0.0, 0.0)
    b, d = pairs[:, 0], pairs[:, 1]
    life = d - b
    d_max = float(d.max())
    return (
        math.fsum(b * life),
        math.fsum((d_max - d) * life),
        math.fsum(b**2 * life**4),
        math.fsum((d_max - d) ** 2 * life**4),
    )


def persistence_entropy(diagram) -> float:
    """Shannon entropy (nats) of normalized lifetimes; 0 for empty or all-zero."""
    pairs = _finite_pairs(diagram)
    life = pairs[:, 1] - pairs[:, 0] if pairs.size else np.empty(0)
    life = life[life > 0]
    if not life.size:
        return 0.0
    total = math.fsum(life)
    p = life / total
    return -math.fsum(p * np.log(p))


def betti_curve(diagram, s: float) -> int:
    """Number of pairs alive at scale s (half-open: birth <= s < death)."""
    pairs = _finite_pairs(diagram)
    if not pairs.size:
        return 0
    return int(np.sum((pairs[:, 0] <= s) & (s < pairs[:, 1])))


def betti_l1(diagram) -> float:
    """Exact integral of the Betti curve: the sum of lifetimes."""
    pairs = _finite_pairs(diagram)
    return math.fsum(d - b for b, d in pairs)


def landscape_eval(diagram, k: int, t: float) -> float:
    """k-th largest tent value at t (0 when fewer than k pairs)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    pairs = _finite_pairs(diagram)
    if pairs.shape[0] < k:
        return 0.0
    tents = np.maximum(0.0, np.minimum(t - pairs[:, 0], pairs[:, 1] - t))
    return float(np.partition(tents, -k)[-k])


def _merge_max(xs1, ys1, xs2, ys2):
    """Pointwise max of two piecewise-linear functions on a shared domain."""
    xs = np.union1d(xs1, xs2)
    y1 = np.interp(xs, xs1, ys1)
    y2 = np.interp(xs, xs2, ys2)
    out_x = [xs[0]]
    out_y = [max(y1[0], y2[0])]
    for a in range(len(xs) - 1):
        d_left = y1[a] - y2[a]
        d_right = y1[a + 1] - y2[a + 1]
        if (d_left > 0 > d_right) or (d_left < 0 < d_right):
            # Segments cross strictly inside the interval.
            frac = d_left / (d_left - d_right)
            x_cross = xs[a] + frac * (xs[a + 1] - xs[a])
            if xs[a] < x_cross < xs[a + 1]:
                out_x.append(x_cross)
                out_y.append(y1[a] + frac * (y1[a + 1] - y1[a]))
        out_x.append(xs[a + 1])
        out_y.append(max(y1[a + 1], y2[a + 1]))
    return np.array(out_x), np.array(out_y)


def _first_landscape(pairs):
    """Breakpoints of the upper envelope of the tents, by pairwise merging."""
    lo = float(pairs[:, 0].min())
    hi = float(pairs[:, 1].max())
    pieces = []
    for b, d in pairs:
        if d > b:
            xs = np.unique([lo, b, (b + d) / 2, d, hi])
            ys = np.maximum(0.0, np.minimum(xs - b, d - xs))
            pieces.append((xs, ys))
    if not pieces:
        return np.array([lo, hi]), np.zeros(2)
    while len(pieces) > 1:
        merged = []
        for a in range(0, len(pieces) - 1, 2):
            merged.append(_merge_max(*pieces[a], *pieces[a + 1]))
        if len(pieces) % 2:
            merged.append(pieces[-1])
        pieces = merged
    return pieces[0]


def landscape_l1(diagram, k: int = 1) -> float:
    """Exact integral of the k-th landscape via breakpoint integration.

    k = 1 merges tent envelopes pairwise (cheap for large diagrams); larger k
    evaluates the k-th largest tent on the full candidate-breakpoint set
    (tent kinks plus pairwise crossing points), which is quadratic in the
    diagram size and meant for small diagrams.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    pairs = _finite_pairs(diagram)
    pairs = pairs[pairs[:, 1] > pairs[:, 0]]
    if pairs.shape[0] < k:
        return 0.0
    if k == 1:
        xs, ys = _first_landscape(pairs)
        return float(np.trapezoid(ys, xs))
    b, d = pairs[:, 0], pairs[:, 1]
    crossings = (b[:, None] + d[None, :]).ravel() / 2
    xs = np.unique(np.concatenate([b, d, crossings]))
    tents = np.maximum(0.0, np.minimum(xs[None, :] - b[:, None], d[:, None] - xs[None, :]))
    ys = -np.partition(-tents, k - 1, axis=0)[k - 1]
    return float(np.trapezoid(ys, xs))


def _pair_costs(p1, p2):
    """Chebyshev costs between diagram points and each point's diagonal cost."""
    direct = np.maximum(
        np.abs(p1[:, 0, None] - p2[None, :, 0]),
        np.abs(p1[:, 1, None] - p2[None, :, 1]),
    )
    diag1 = (p1[:, 1] - p1[:, 0]) / 2
    diag2 = (p2[:, 1] - p2[:, 0]) / 2
    return direct, diag1, diag2


def _kuhn_match(adj, n_left, n_right) -> int:
    """Maximum bipartite matching size (augmenting paths)."""
    match_right = np.full(n_right, -1, dtype=np.int64)

    def try_augment(i, visited):
        for j in adj[i]:
            if not visited[j]:
                visited[j] = True
                if match_right[j] == -1 or try_augment(match_right[j], visited):
                    match_right[j] = i
                    return True
        return False

    size = 0
    for i in range(n_left):
        if try_augment(i, np.zeros(n_right, dtype=bool)):
            size += 1
    return size


def bottleneck_distance(d1, d2) -> float:
    """Exact bottleneck distance between finite diagrams.

    Binary search over the candidate radii (all point-to-point Chebyshev
    costs and half-lifetimes); feasibility of a radius is a perfect-matching
    test on the diagonal-augmented bipartite graph.
    """
    p1 = _finite_pairs(d1)
    p2 = _finite_pairs(d2)
    p1 = p1[p1[:, 1] > p1[:, 0]]
    p2 = p2[p2[:, 1] > p2[:, 0]]
    m, n = p1.shape[0], p2.shape[0]
    if m == 0 and n == 0:
        return 0.0
    direct, diag1, diag2 = _pair_costs(p1, p2)
    candidates = np.unique(np.concatenate([[0.0], direct.ravel(), diag1, diag2]))

    def feasible(r):
        # Real point i may match real point j (cost <= r) or its own diagonal
        # slot; diagonal slots match each other freely. A perfect matching of
        # size m + n exists iff the bottleneck cost is <= r.
        adj = []
        for i in range(m):
            row = list(np.nonzero(direct[i] <= r)[0])
            if diag1[i] <= r:
                row.append(n + i)
            adj.append(row)
        for j in range(n):
            row = list(range(n, n + m))  # diagonal slot pairs with any slot
            if diag2[j] <= r:
                row.append(j)
            adj.append(row)
        return _kuhn_match(adj, m + n, n + m) == m + n

    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def _hungarian(cost: np.ndarray) -> float:
    """Exact minimum-cost square assignment (shortest augmenting paths)."""
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    assigned = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        assigned[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        way = np.zeros(n + 1, dtype=np.int64)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = assigned[j0]
            cur = cost[i0 - 1, :] - u[i0] - v[1:]
            cur[used[1:]] = np.inf
            better = cur < minv[1:]
            minv[1:][better] = cur[better]
            way[1:][better] = j0
            masked = np.where(used[1:], np.inf, minv[1:])
            j1 = int(np.argmin(masked)) + 1
            delta = masked[j1 - 1]
            u[assigned[used]] += delta
            v[used] -= delta
            minv[1:][~used[1:]] -= delta
            j0 = j1
            if assigned[j0] == 0:
                break
        while j0:
            assigned[j0] = assigned[way[j0]]
            j0 = way[j0]
    total = 0.0
    for j in range(1, n + 1):
        total += cost[assigned[j] - 1, j - 1]
    return total


def wasserstein_distance(d1, d2, p: float = 1) -> float:
    """Exact p-Wasserstein distance between finite diagrams.

    Solves the assignment problem on the square cost matrix augmented with
    one diagonal slot per point (Chebyshev ground metric, cost raised to p).
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    p1 = _finite_pairs(d1)
    p2 = _finite_pairs(d2)
    p1 = p1[p1[:, 1] > p1[:, 0]]
    p2 = p2[p2[:, 1] > p2[:, 0]]
    m, n = p1.shape[0], p2.shape[0]
    if m == 0 and n == 0:
        return 0.0
    direct, diag1, diag2 = _pair_costs(p1, p2)
    finite_max = max(
        direct.max(initial=0.0), diag1.max(initial=0.0), diag2.max(initial=0.0)
    )
    big = (finite_max**p + 1.0) * (m + n)
    cost = np.full((m + n, m + n), big)
    cost[:m, :n] = direct**p
    cost[m:, n:] = 0.0
    cost[np.arange(m), n + np.arange(m)] = diag1**p
    cost[m + np.arange(n), np.arange(n)] = diag2**p
    return float(_hungarian(cost) ** (1.0 / p))


def compute_topological_features(diagram) -> TopologicalFeatureVector:
    """All nine features of a finite degree-1 diagram, in fixed order."""
    pairs = _finite_pairs(diagram)
    ac = adcock_carlsson(pairs)
    return TopologicalFeatureVector(
        wasserstein_diag=wasserstein_to_diagonal(pairs),
        bottleneck_diag=bottleneck_to_diagonal(pairs),
        ac1=ac[0],
        ac2=ac[1],
        ac3=ac[2],
        ac4=ac[3],
        entropy=persistence_entropy(pairs),
        betti_l1=betti_l1(pairs),
        landscape1_l1=landscape_l1(pairs, k=1),
    )
