"""Takens delay embedding with data-driven delay and dimension selection.

The delay is chosen at the first strict local minimum of the binned mutual
information between the series and its lagged copy; the dimension by the
false-nearest-neighbor criterion of Kennel et al. Neighbor search is exact
brute force, which is fine at the point-cloud sizes this package targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base import BaseEstimator, check_series


@dataclass(frozen=True)
class EmbeddingParams:
    """Delay (in samples) and dimension of a delay embedding."""

    tau: int
    dim: int

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError(f"tau must be >= 1, got {self.tau}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")


def delay_embed(x, tau: int, dim: int) -> np.ndarray:
    """Embed a series as points ``(x_i, x_{i+tau}, ..., x_{i+(dim-1)tau})``.

    Returns an array of shape ``(T - (dim-1)*tau, dim)``.
    """
    x = check_series(x)
    params = EmbeddingParams(tau, dim)
    n_points = len(x) - (params.dim - 1) * params.tau
    if n_points < 1:
        raise ValueError(
            f"embedding window (dim-1)*tau = {(params.dim - 1) * params.tau} "
            f"does not fit a series of length {len(x)}"
        )
    cloud = np.empty((n_points, params.dim))
    for axis in range(params.dim):
        start = axis * params.tau
        cloud[:, axis] = x[start : start + n_points]
    return cloud


def mutual_information(x, tau: int, n_bins: int = 16) -> float:
    """Binned mutual information (nats) between ``x_t`` and ``x_{t+tau}``.

    Uses an equal-width 2-D histogram with ``n_bins`` per axis over the
    series min-max range (same range on both axes, so the estimate is
    exactly symmetric in the two arguments). A constant series returns 0.
    """
    x = check_series(x)
    if not 1 <= tau < len(x):
        raise ValueError(f"tau must be in [1, {len(x) - 1}], got {tau}")
    if n_bins < 1:
        raise ValueError("n_bins must be positive")
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        return 0.0
    joint, _, _ = np.histogram2d(
        x[:-tau], x[tau:], bins=n_bins, range=[[lo, hi], [lo, hi]]
    )
    # Marginals come from the integer counts (exact in any summation order)
    # and the cell sum uses fsum, so transposing the histogram (reversing the
    # series) yields the bitwise-identical estimate.
    total = joint.sum()
    px = joint.sum(axis=1) / total
    py = joint.sum(axis=0) / total
    rows, cols = np.nonzero(joint > 0)
    cells = joint[rows, cols] / total
    mi = math.fsum(cells * np.log(cells / (px[rows] * py[cols])))
    return max(mi, 0.0)


def optimal_delay(x, tau_max: int, n_bins: int = 16) -> int:
    """Delay at the first strict local minimum of the mutual information.

    Scans tau in ``[2, tau_max]`` for the first tau with
    ``MI(tau-1) > MI(tau) < MI(tau+1)``. If no strict local minimum exists
    (flat or monotone MI curves, e.g. white noise), falls back to the argmin
    of MI over ``[1, tau_max]``.
    """
    x = check_series(x)
    if tau_max < 2:
        raise ValueError(f"tau_max must be >= 2, got {tau_max}")
    top = min(tau_max + 1, len(x) - 1)
    mi = np.array([mutual_information(x, tau, n_bins) for tau in range(1, top + 1)])
    for tau in range(2, min(tau_max, top - 1) + 1):
        if mi[tau - 2] > mi[tau - 1] < mi[tau]:
            return tau
    return int(np.argmin(mi[: min(tau_max, top)])) + 1


def false_nearest_fraction(
    x, tau: int, d: int, r_tol: float = 10.0, a_tol: float = 2.0
) -> float:
    """Fraction of d-dim nearest neighbors that separate in dimension d+1.

    A neighbor pair (i, j) is false when the extra-coordinate gap
    ``|x_{i+d*tau} - x_{j+d*tau}|`` exceeds ``r_tol`` times their d-dim
    distance, or when their (d+1)-dim distance exceeds ``a_tol`` times the
    series standard deviation. Points are restricted to those embeddable in
    dimension d+1; nearest-neighbor ties go to the lowest index.
    """
    x = check_series(x)
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    higher = delay_embed(x, tau, d + 1)
    if higher.shape[0] < 2:
        raise ValueError("fewer than 2 points embeddable in dimension d+1")
    lower = higher[:, :d]
    extra = higher[:, d]

    diff = lower[:, None, :] - lower[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    np.fill_diagonal(dist, np.inf)
    nn = np.argmin(dist, axis=1)
    r_d = dist[np.arange(len(nn)), nn]
    gap = np.abs(extra - extra[nn])

    ratio_false = np.where(r_d > 0, gap > r_tol * r_d, gap > 0)
    sigma = float(x.std())
    if sigma > 0:
        size_false = np.sqrt(r_d**2 + gap**2) / sigma > a_tol
    else:
        size_false = np.zeros(len(nn), dtype=bool)
    return float(np.mean(ratio_false | size_false))


def optimal_dimension(
    x,
    tau: int,
    d_max: int = 10,
    threshold: float = 0.01,
    r_tol: float = 10.0,
    a_tol: float = 2.0,
) -> int:
    """Smallest d with false-neighbor fraction below ``threshold``, else d_max."""
    x = check_series(x)
    if d_max < 2:
        raise ValueError(f"d_max must be >= 2, got {d_max}")
    for d in range(1, d_max + 1):
        if len(x) - d * tau < 2:
            break
        if false_nearest_fraction(x, tau, d, r_tol, a_tol) < threshold:
            return d
    return d_max


class TakensEmbedding(BaseEstimator):
    """Transformer turning series into delay-embedded point clouds.

    With ``tau='auto'`` / ``dim='auto'`` the parameters are selected per
    series (mutual-information delay, false-nearest-neighbor dimension).
    ``transform`` accepts a single 1-D series or a sequence of them.
    """

    def __init__(
        self,
        tau="auto",
        dim="auto",
        tau_max: int = 20,
        n_bins: int = 16,
        r_tol: float = 10.0,
        a_tol: float = 2.0,
        fnn_threshold: float = 0.01,
        d_max: int = 10,
    ):
        self.tau = tau
        self.dim = dim
        self.tau_max = tau_max
        self.n_bins = n_bins
        self.r_tol = r_tol
        self.a_tol = a_tol
        self.fnn_threshold = fnn_threshold
        self.d_max = d_max

    def fit(self, X=None, y=None):
        return self

    def select_params(self, x) -> EmbeddingParams:
        """Resolve (tau, dim) for one series, honoring fixed settings."""
        x = check_series(x)
        if x.min() == x.max():
            # Degenerate constant series: any embedding collapses to one point.
            return EmbeddingParams(
                tau=1 if self.tau == "auto" else self.tau,
                dim=2 if self.dim == "auto" else self.dim,
            )
        if self.tau == "auto":
            tau = optimal_delay(x, min(self.tau_max, len(x) - 2), self.n_bins)
        else:
            tau = self.tau
        if self.dim == "auto":
            dim = optimal_dimension(
                x, tau, self.d_max, self.fnn_threshold, self.r_tol, self.a_tol
            )
            while dim > 1 and len(x) - (dim - 1) * tau < 2:
                dim -= 1
        else:
            dim = self.dim
        return EmbeddingParams(tau, dim)

    def transform(self, X):
        if np.ndim(X) == 1 or hasattr(X, "values"):
            params = self.select_params(X)
            return delay_embed(X, params.tau, params.dim)
        return [self.transform(x) for x in X]
