"""Feature-set transformers: raw, statistical, and topological vectors.

Each transformer maps a batch of series (list of 1-D arrays, a 2-D array, or
``TimeSeries`` objects) to a feature matrix with one row per series. Batch
extraction can fan out over worker processes (``n_jobs``); results are
collected in input order and are bit-identical to a serial run because each
row is a pure function of its series.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .base import BaseEstimator, check_series
from .diagram_features import TopologicalFeatureVector, compute_topological_features
from .embedding import TakensEmbedding, delay_embed
from .persistence import pairwise_distances, rips_diagram
from .stat_features import StatFeatureVector, stat_feature_vector


def topological_feature_vector(
    x, embedder: TakensEmbedding | None = None, threshold="enclosing"
) -> TopologicalFeatureVector:
    """Embed one series, take its degree-1 diagram, and vectorize it."""
    vector, _params = _topological_with_params(x, embedder, threshold)
    return vector


def _topological_with_params(x, embedder, threshold):
    x = check_series(x)
    if embedder is None:
        embedder = TakensEmbedding()
    params = embedder.select_params(x)
    cloud = delay_embed(x, params.tau, params.dim)
    diagram = rips_diagram(pairwise_distances(cloud), max_degree=1, threshold=threshold)[1]
    return compute_topological_features(diagram.finite()), params


def _series_list(X) -> list[np.ndarray]:
    if hasattr(X, "series"):  # LabeledDataset
        return [check_series(s) for s in X.series]
    if np.ndim(X) == 1 or hasattr(X, "values"):
        return [check_series(X)]
    return [check_series(x) for x in X]


def _map_rows(worker, payloads, n_jobs):
    if n_jobs == 1:
        return [worker(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(worker, payloads))


def _topo_worker(payload):
    values, params, threshold = payload
    embedder = TakensEmbedding(**params)
    vector, chosen = _topological_with_params(values, embedder, threshold)
    return vector.to_array(), chosen.tau, chosen.dim


def _stat_worker(payload):
    values, window = payload
    return stat_feature_vector(values, window).to_array()


class TopologicalFeatures(BaseEstimator):
    """Nine degree-1 persistence features per series.

    After ``transform``, ``embedding_params_`` holds the (tau, dim) chosen
    for each series in order.
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
        threshold="enclosing",
        n_jobs: int = 1,
    ):
        self.tau = tau
        self.dim = dim
        self.tau_max = tau_max
        self.n_bins = n_bins
        self.r_tol = r_tol
        self.a_tol = a_tol
        self.fnn_threshold = fnn_threshold
        self.d_max = d_max
        self.threshold = threshold
        self.n_jobs = n_jobs

    @staticmethod
    def feature_names() -> list[str]:
        return TopologicalFeatureVector.names()

    def fit(self, X=None, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        series = _series_list(X)
        embed_params = {
            k: getattr(self, k)
            for k in ("tau", "dim", "tau_max", "n_bins", "r_tol", "a_tol",
                      "fnn_threshold", "d_max")
        }
        payloads = [(x, embed_params, self.threshold) for x in series]
        rows = _map_rows(_topo_worker, payloads, self.n_jobs)
        self.embedding_params_ = [(tau, dim) for _, tau, dim in rows]
        return np.array([row for row, _, _ in rows]).reshape(len(series), -1)

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X, y).transform(X)


class StatisticalFeatures(BaseEstimator):
    """Eleven raw-series statistics per series."""

    def __init__(self, window: int = 50, n_jobs: int = 1):
        self.window = window
        self.n_jobs = n_jobs

    @staticmethod
    def feature_names() -> list[str]:
        return StatFeatureVector.names()

    def fit(self, X=None, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        series = _series_list(X)
        rows = _map_rows(_stat_worker, [(x, self.window) for x in series], self.n_jobs)
        return np.array(rows).reshape(len(series), -1)

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X, y).transform(X)


class RawFeatures(BaseEstimator):
    """The series values themselves, z-scored per series.

    All series must share one length. A constant series maps to all zeros.
    """

    def __init__(self):
        pass

    def fit(self, X=None, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        series = _series_list(X)
        lengths = {len(x) for x in series}
        if len(lengths) != 1:
            raise ValueError(f"raw features need equal-length series, got lengths {sorted(lengths)}")
        out = np.empty((len(series), lengths.pop()))
        for row, x in enumerate(series):
            std = x.std()
            out[row] = (x - x.mean()) / std if std > 0 else 0.0
        return out

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X, y).transform(X)
