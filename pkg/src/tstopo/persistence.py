"""Vietoris-Rips persistence diagrams (degrees 0 and 1) over Z/2.

Degree 0 comes from union-find over the sorted edge list (finite deaths are
the minimum-spanning-tree edge weights); degree 1 from a reduction of the
triangle coboundary matrix (see ``_reduction``). The default filtration cap
is the enclosing radius — the smallest radius at which some vertex sees the
whole cloud — beyond which the complex is a cone and degree-1 homology is
trivial, so every degree-1 pair is finite.

``naive_reduction_oracle`` is an independent textbook implementation (full
boundary matrix of the 2-skeleton, unoptimized column reduction) used to
cross-check the fast path on small inputs.

Conventions shared by both implementations: simplices are ordered by
(filtration value, dimension, lexicographic vertex tuple); degree-1 pairs
with zero persistence are dropped; degree-0 keeps all tree-edge deaths
(duplicate points yield (0, 0) pairs) plus one (0, inf) pair per component.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _reduction

ENCLOSING = "enclosing"


@dataclass
class PersistenceDiagram:
    """Multiset of (birth, death) pairs for one homology degree."""

    degree: int
    pairs: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=np.float64).reshape(-1, 2)
        if pairs.size:
            if np.any(np.isnan(pairs)) or np.any(pairs[:, 0] > pairs[:, 1]):
                raise ValueError("diagram pairs must satisfy birth <= death")
            if np.any(pairs[:, 0] < 0):
                raise ValueError("births must be non-negative")
            pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
        self.pairs = pairs

    @property
    def births(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def deaths(self) -> np.ndarray:
        return self.pairs[:, 1]

    @property
    def lifetimes(self) -> np.ndarray:
        return self.pairs[:, 1] - self.pairs[:, 0]

    @property
    def d_max(self) -> float:
        finite = self.deaths[np.isfinite(self.deaths)]
        return float(finite.max()) if finite.size else 0.0

    def finite(self) -> "PersistenceDiagram":
        """Copy with infinite-death pairs stripped."""
        return PersistenceDiagram(self.degree, self.pairs[np.isfinite(self.deaths)])

    def __len__(self) -> int:
        return self.pairs.shape[0]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PersistenceDiagram)
            and self.degree == other.degree
            and self.pairs.shape == other.pairs.shape
            and bool(np.all(self.pairs == other.pairs))
        )


def pairwise_distances(cloud) -> np.ndarray:
    """Euclidean distance matrix, exactly symmetric by construction."""
    cloud = np.asarray(cloud, dtype=np.float64)
    if cloud.ndim == 1:
        cloud = cloud[:, None]
    if cloud.ndim != 2 or cloud.shape[0] < 1:
        raise ValueError("point cloud must be a non-empty 2-D array")
    n = cloud.shape[0]
    dist = np.zeros((n, n))
    for i in range(n - 1):
        row = np.sqrt(np.sum((cloud[i + 1 :] - cloud[i]) ** 2, axis=1))
        dist[i, i + 1 :] = row
        dist[i + 1 :, i] = row
    return dist


def enclosing_radius(dist: np.ndarray) -> float:
    """min over vertices of the max distance to that vertex."""
    return float(dist.max(axis=1).min())


def _check_dist(dist) -> np.ndarray:
    dist = np.asarray(dist, dtype=np.float64)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1] or dist.shape[0] == 0:
        raise ValueError("distance matrix must be square and non-empty")
    if not np.all(np.isfinite(dist)):
        raise ValueError("distance matrix entries must be finite")
    if np.any(dist < 0) or np.any(np.diag(dist) != 0) or not np.array_equal(dist, dist.T):
        raise ValueError("distance matrix must be symmetric, non-negative, zero-diagonal")
    return dist


def _resolve_threshold(dist, threshold) -> float:
    if isinstance(threshold, str):
        if threshold != ENCLOSING:
            raise ValueError(f"unknown threshold mode {threshold!r}")
        return enclosing_radius(dist)
    value = float(threshold)
    if value < 0:
        raise ValueError("threshold must be non-negative")
    return value


def _sorted_edges(dist, threshold):
    n = dist.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    w = dist[iu, ju]
    keep = w <= threshold
    iu, ju, w = iu[keep], ju[keep], w[keep]
    order = np.lexsort((ju, iu, w))
    return iu[order].astype(np.int64), ju[order].astype(np.int64), w[order]


def rips_diagram(dist, max_degree: int = 1, threshold=ENCLOSING) -> dict:
    """Persistence diagrams of the Rips filtration of a distance matrix.

    Returns ``{0: PersistenceDiagram, ...}`` up to ``max_degree`` (0 or 1).
    ``threshold`` is a number or ``"enclosing"`` (the default cap, at which
    all degree-1 classes have died).
    """
    dist = _check_dist(dist)
    if max_degree not in (0, 1):
        raise ValueError("max_degree must be 0 or 1")
    n = dist.shape[0]
    thr = _resolve_threshold(dist, threshold)

    ei, ej, ew = _sorted_edges(dist, thr)
    deaths, is_tree = _reduction.kruskal_deaths(n, ei, ej, ew)
    n_components = n - deaths.shape[0]
    h0 = np.empty((deaths.shape[0] + n_components, 2))
    h0[: deaths.shape[0], 0] = 0.0
    h0[: deaths.shape[0], 1] = deaths
    h0[deaths.shape[0] :, 0] = 0.0
    h0[deaths.shape[0] :, 1] = np.inf
    out = {0: PersistenceDiagram(0, h0)}

    if max_degree >= 1:
        if n < 3:
            out[1] = PersistenceDiagram(1)
        else:
            births, fin_deaths, ess = _reduction.h1_pairs(dist, ei, ej, ew, is_tree, thr)
            h1 = np.empty((births.shape[0] + ess.shape[0], 2))
            h1[: births.shape[0], 0] = births
            h1[: births.shape[0], 1] = fin_deaths
            h1[births.shape[0] :, 0] = ess
            h1[births.shape[0] :, 1] = np.inf
            out[1] = PersistenceDiagram(1, h1)
    return out


def naive_reduction_oracle(
    dist, max_degree: int = 1, threshold=ENCLOSING, max_points: int = 10
) -> dict:
    """Textbook full-boundary-matrix reduction; test oracle for rips_diagram.

    Enumerates every vertex, edge, and triangle up to the threshold, reduces
    the boundary matrix column by column over Z/2 with no optimizations, and
    reads pairs off the lows. Only for small inputs (``n <= max_points``).
    """
    dist = _check_dist(dist)
    if max_degree not in (0, 1):
        raise ValueError("max_degree must be 0 or 1")
    n = dist.shape[0]
    if n > max_points:
        raise ValueError(f"oracle limited to {max_points} points, got {n}")
    thr = _resolve_threshold(dist, threshold)

    simplices = [(0.0, tuple([v])) for v in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i, j] <= thr:
                simplices.append((float(dist[i, j]), (i, j)))
    if max_degree >= 1:
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    filt = max(dist[i, j], dist[i, k], dist[j, k])
                    if filt <= thr:
                        simplices.append((float(filt), (i, j, k)))
    simplices.sort(key=lambda s: (s[0], len(s[1]), s[1]))
    index_of = {verts: idx for idx, (_, verts) in enumerate(simplices)}

    columns = []
    for _, verts in simplices:
        if len(verts) == 1:
            columns.append(set())
        else:
            faces = [verts[:a] + verts[a + 1 :] for a in range(len(verts))]
            columns.append({index_of[f] for f in faces})

    low_of = {}
    for j, col in enumerate(columns):
        while col and max(col) in low_of:
            col = col ^ columns[low_of[max(col)]]
        columns[j] = col
        if col:
            low_of[max(col)] = j

    death_of = {low: j for low, j in low_of.items()}
    diagrams = {deg: [] for deg in range(max_degree + 1)}
    for idx, (filt, verts) in enumerate(simplices):
        dim = len(verts) - 1
        if columns[idx]:
            continue  # not a cycle-creating simplex
        if idx in death_of:
            killer = simplices[death_of[idx]][0]
            if dim == 0 or killer > filt:
                diagrams[dim].append((filt, killer))
        elif dim <= max_degree:
            diagrams[dim].append((filt, np.inf))
    return {
        deg: PersistenceDiagram(deg, np.array(rows).reshape(-1, 2))
        for deg, rows in diagrams.items()
    }


def write_diagrams_csv(diagrams: dict, path) -> None:
    """Dump diagrams as rows of (degree, birth, death); death may be 'inf'."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["degree", "birth", "death"])
        for degree in sorted(diagrams):
            for birth, death in diagrams[degree].pairs:
                writer.writerow(
                    [degree, repr(float(birth)), "inf" if np.isinf(death) else repr(float(death))]
                )
