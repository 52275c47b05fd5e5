"""Eleven descriptive statistics of a raw series.

The features mirror common time-series feature-library definitions; every
definition is fixed here so results are reproducible without any external
library:

* mean, variance — population variance (denominator n), as everywhere in
  this module.
* spectral_entropy — Shannon entropy of the normalized periodogram over
  positive DFT frequencies, divided by log(#bins), so it lands in [0, 1].
* lumpiness / stability — variance of per-window variances / means over
  non-overlapping windows (default width 50; the trailing partial window is
  dropped).
* hurst — rescaled-range estimate: least-squares slope of log(R/S) against
  log(window) over dyadic window sizes.
* std_first_derivative — standard deviation of first differences.
* linearity — R^2 of the least-squares regression of the values on time.
* binarize_mean — fraction of samples strictly above the series mean.
* kpss_stat — level-stationarity KPSS statistic with Bartlett-kernel
  long-run variance, bandwidth floor(4 * (n/100)^(1/4)).
* histogram_mode — center of the fullest of 10 equal-width bins over
  [min, max]; leftmost bin wins ties.

Degenerate conventions: a zero-variance series has spectral_entropy 0,
hurst 0.5, kpss 0, linearity 1 (it is exactly affine), histogram_mode equal
to the constant value.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .base import check_series


@dataclass(frozen=True)
class StatFeatureVector:
    """The eleven statistical features, in fixed output order."""

    mean: float
    variance: float
    spectral_entropy: float
    lumpiness: float
    stability: float
    hurst: float
    std_first_derivative: float
    linearity: float
    binarize_mean: float
    kpss_stat: float
    histogram_mode: float

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)])


def spectral_entropy(x) -> float:
    """Normalized Shannon entropy of the positive-frequency periodogram."""
    x = check_series(x, min_length=8)
    spectrum = np.abs(np.fft.rfft(x)[1:]) ** 2
    total = spectrum.sum()
    if total == 0:
        return 0.0
    p = spectrum / total
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)) / np.log(spectrum.size))


def _window_stats(x, window):
    n_windows = len(x) // window
    tiled = x[: n_windows * window].reshape(n_windows, window)
    return tiled.mean(axis=1), tiled.var(axis=1)


def lumpiness(x, window: int = 50) -> float:
    """Variance of per-window variances over non-overlapping windows."""
    x = check_series(x, min_length=2 * window)
    return float(np.var(_window_stats(x, window)[1]))


def stability(x, window: int = 50) -> float:
    """Variance of per-window means over non-overlapping windows."""
    x = check_series(x, min_length=2 * window)
    return float(np.var(_window_stats(x, window)[0]))


def hurst_exponent(x, min_window: int = 16) -> float:
    """Rescaled-range (R/S) Hurst estimate over dyadic window sizes.

    For each window size w in {min_window, 2*min_window, ...} up to half the
    series length, the series is cut into blocks of w samples; R is the range
    of the cumulative demeaned block and S the block standard deviation. The
    estimate is the least-squares slope of log(mean R/S) on log(w). Returns
    0.5 for a constant series, where R/S is undefined.
    """
    x = check_series(x, min_length=100)
    if x.min() == x.max():
        return 0.5
    sizes = []
    ratios = []
    w = min_window
    while w <= len(x) // 2:
        n_blocks = len(x) // w
        blocks = x[: n_blocks * w].reshape(n_blocks, w)
        centered = blocks - blocks.mean(axis=1, keepdims=True)
        cumulative = np.cumsum(centered, axis=1)
        spans = cumulative.max(axis=1) - cumulative.min(axis=1)
        stds = blocks.std(axis=1)
        ok = stds > 0
        if np.any(ok):
            sizes.append(w)
            ratios.append(np.mean(spans[ok] / stds[ok]))
        w *= 2
    if len(sizes) < 2:
        return 0.5
    slope = np.polyfit(np.log(sizes), np.log(ratios), 1)[0]
    return float(slope)


def linearity(x) -> float:
    """R^2 of the ordinary least-squares fit of the values on time."""
    x = check_series(x)
    t = np.arange(len(x), dtype=np.float64)
    ss_tot = float(np.sum((x - x.mean()) ** 2))
    if ss_tot == 0:
        return 1.0  # constant series is exactly affine
    slope = float(np.sum((t - t.mean()) * (x - x.mean()))) / float(np.sum((t - t.mean()) ** 2))
    residuals = x - x.mean() - slope * (t - t.mean())
    return 1.0 - float(np.sum(residuals**2)) / ss_tot


def binarize_mean(x) -> float:
    """Fraction of samples strictly greater than the series mean."""
    x = check_series(x)
    return float(np.mean(x > x.mean()))


def kpss_statistic(x) -> float:
    """Level-stationarity KPSS statistic (Bartlett long-run variance)."""
    x = check_series(x, min_length=10)
    n = len(x)
    e = x - x.mean()
    gamma0 = float(np.sum(e * e)) / n
    if gamma0 == 0:
        return 0.0
    bandwidth = int(np.floor(4.0 * (n / 100.0) ** 0.25))
    longrun = gamma0
    for lag in range(1, bandwidth + 1):
        weight = 1.0 - lag / (bandwidth + 1.0)
        longrun += 2.0 * weight * float(np.sum(e[lag:] * e[:-lag])) / n
    if longrun <= 0:
        longrun = gamma0
    partial = np.cumsum(e)
    return float(np.sum(partial**2) / (n**2 * longrun))


def histogram_mode(x, n_bins: int = 10) -> float:
    """Center of the fullest of n_bins equal-width bins (leftmost on ties)."""
    x = check_series(x)
    if x.min() == x.max():
        return float(x[0])
    counts, edges = np.histogram(x, bins=n_bins)
    best = int(np.argmax(counts))
    return float((edges[best] + edges[best + 1]) / 2)


def stat_feature_vector(x, window: int = 50) -> StatFeatureVector:
    """All eleven statistical features of one series."""
    x = check_series(x, min_length=max(2 * window, 100))
    return StatFeatureVector(
        mean=float(x.mean()),
        variance=float(x.var()),
        spectral_entropy=spectral_entropy(x),
        lumpiness=lumpiness(x, window),
        stability=stability(x, window),
        hurst=hurst_exponent(x),
        std_first_derivative=float(np.diff(x).std()),
        linearity=linearity(x),
        binarize_mean=binarize_mean(x),
        kpss_stat=kpss_statistic(x),
        histogram_mode=histogram_mode(x),
    )
