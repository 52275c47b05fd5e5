"""Estimator plumbing: parameter introspection, cloning, input validation.

The estimator classes in this package follow the scikit-learn protocol
(``fit`` / ``transform`` / ``predict`` plus ``get_params`` / ``set_params``)
without depending on scikit-learn itself, so they can be dropped into
sklearn pipelines by duck typing.
"""

from __future__ import annotations

import inspect

import numpy as np


class NotFittedError(RuntimeError):
    """Raised when ``transform`` or ``predict`` is called before ``fit``."""


class BaseEstimator:
    """Minimal sklearn-compatible base: params are the ``__init__`` arguments."""

    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [
            name
            for name, p in sig.parameters.items()
            if name != "self" and p.kind not in (p.VAR_POSITIONAL, p.VAR_KEYWORD)
        ]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "BaseEstimator":
        valid = set(self._param_names())
        for key, value in params.items():
            if key not in valid:
                raise ValueError(f"invalid parameter {key!r} for {type(self).__name__}")
            setattr(self, key, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


def clone(estimator):
    """Fresh unfitted copy constructed from ``get_params``."""
    return type(estimator)(**estimator.get_params())


def check_series(x, min_length: int = 2) -> np.ndarray:
    """Coerce a time series (array or TimeSeries-like) to a finite 1-D float array."""
    values = getattr(x, "values", x)
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D series, got shape {arr.shape}")
    if arr.shape[0] < min_length:
        raise ValueError(f"series too short: {arr.shape[0]} < {min_length}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("series contains non-finite values")
    return arr


def check_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a finite 2-D float array."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_X_y(X, y):
    """Validate a feature matrix with binary 0/1 labels of matching length."""
    X = check_matrix(X)
    y = np.asarray(y)
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise ValueError(f"labels shape {y.shape} does not match {X.shape[0]} rows")
    y = y.astype(np.int64)
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be binary 0/1")
    return X, y
