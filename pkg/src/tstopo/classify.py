"""From-scratch binary classifiers, resampling, and evaluation metrics.

Models score rows in [0, 1] (``predict_score``); the predicted label is
``score >= 0.5``. Features are expected on comparable scales: the
``Standardizer`` (z-scoring fit on training data only) is applied inside
``cross_validate`` and by the experiment runner, never inside a model.

All fits are deterministic given the estimator parameters and data order;
the only stochastic model is the random forest, seeded per tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .base import BaseEstimator, NotFittedError, check_X_y, check_matrix, clone
from .simulate import mix_seed


class Standardizer(BaseEstimator):
    """Column z-scoring fit on training data; constant columns are centered only."""

    def __init__(self):
        pass

    def fit(self, X, y=None):
        X = check_matrix(X)
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale_ = np.where(std > 0, std, 1.0)
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "mean_"):
            raise NotFittedError("Standardizer.fit must run first")
        return (check_matrix(X) - self.mean_) / self.scale_

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X).transform(X)


class KNeighborsClassifier(BaseEstimator):
    """k-nearest-neighbor voting; distance ties go to the lower train index."""

    def __init__(self, k: int = 5):
        self.k = k

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if self.k < 1 or self.k > X.shape[0]:
            raise ValueError(f"k={self.k} out of range for {X.shape[0]} training rows")
        self.X_ = X
        self.y_ = y
        return self

    def predict_score(self, X) -> np.ndarray:
        if not hasattr(self, "X_"):
            raise NotFittedError("fit must run first")
        X = check_matrix(X)
        scores = np.empty(X.shape[0])
        for row in range(X.shape[0]):
            dist = np.sqrt(np.sum((self.X_ - X[row]) ** 2, axis=1))
            nearest = np.argsort(dist, kind="stable")[: self.k]
            scores[row] = self.y_[nearest].mean()
        return scores

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(np.int64)


class LogisticRegression(BaseEstimator):
    """Unregularized logistic regression fit by full-batch gradient descent."""

    def __init__(self, learning_rate: float = 0.1, n_iter: int = 500):
        self.learning_rate = learning_rate
        self.n_iter = n_iter

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        ones = np.column_stack([X, np.ones(X.shape[0])])
        w = np.zeros(ones.shape[1])
        for _ in range(self.n_iter):
            p = _sigmoid(ones @ w)
            w -= self.learning_rate * (ones.T @ (p - y)) / len(y)
        self.coef_ = w[:-1]
        self.intercept_ = w[-1]
        return self

    def predict_score(self, X) -> np.ndarray:
        if not hasattr(self, "coef_"):
            raise NotFittedError("fit must run first")
        return _sigmoid(check_matrix(X) @ self.coef_ + self.intercept_)

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(np.int64)


class LinearDiscriminant(BaseEstimator):
    """Shared-covariance Gaussian discriminant with a diagonal ridge."""

    def __init__(self, ridge: float = 1e-6):
        self.ridge = ridge

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if not (np.any(y == 0) and np.any(y == 1)):
            raise ValueError("both classes required to fit")
        mu0 = X[y == 0].mean(axis=0)
        mu1 = X[y == 1].mean(axis=0)
        centered = X - np.where(y[:, None] == 1, mu1, mu0)
        cov = centered.T @ centered / X.shape[0]
        cov[np.diag_indices_from(cov)] += self.ridge
        self.coef_ = np.linalg.solve(cov, mu1 - mu0)
        prior = np.log(np.sum(y == 1) / np.sum(y == 0))
        self.intercept_ = float(-0.5 * (mu0 + mu1) @ self.coef_ + prior)
        return self

    def predict_score(self, X) -> np.ndarray:
        if not hasattr(self, "coef_"):
            raise NotFittedError("fit must run first")
        return _sigmoid(check_matrix(X) @ self.coef_ + self.intercept_)

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(np.int64)


def _sigmoid(z):
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass
class _TreeNode:
    score: float
    feature: int = -1
    threshold: float = 0.0
    left: "_TreeNode | None" = None
    right: "_TreeNode | None" = None


def _best_split(X, y, columns, min_leaf):
    """Best (feature, threshold) by Gini impurity decrease; None if no valid split."""
    n = len(y)
    total_pos = y.sum()
    parent_gini = 1.0 - (total_pos / n) ** 2 - ((n - total_pos) / n) ** 2
    best = None
    best_gain = 0.0
    for feature in columns:
        order = np.argsort(X[:, feature], kind="stable")
        values = X[order, feature]
        pos = np.cumsum(y[order])
        # split after position s (1-based left size), threshold between values
        left_n = np.arange(1, n)
        valid = (values[1:] > values[:-1]) & (left_n >= min_leaf) & (n - left_n >= min_leaf)
        if not np.any(valid):
            continue
        left_pos = pos[:-1]
        right_pos = total_pos - left_pos
        right_n = n - left_n
        gini_l = 1.0 - (left_pos / left_n) ** 2 - ((left_n - left_pos) / left_n) ** 2
        gini_r = 1.0 - (right_pos / right_n) ** 2 - ((right_n - right_pos) / right_n) ** 2
        gain = parent_gini - (left_n * gini_l + right_n * gini_r) / n
        gain[~valid] = -1.0
        s = int(np.argmax(gain))
        if gain[s] > best_gain + 1e-15:
            best_gain = gain[s]
            best = (feature, float((values[s] + values[s + 1]) / 2))
    return best


def _build_tree(X, y, depth, max_depth, min_leaf, max_features, rng):
    node = _TreeNode(score=float(y.mean()))
    if depth >= max_depth or len(y) < 2 * min_leaf or y.min() == y.max():
        return node
    if max_features is None or max_features >= X.shape[1]:
        columns = range(X.shape[1])
    else:
        columns = np.sort(rng.choice(X.shape[1], size=max_features, replace=False))
    split = _best_split(X, y, columns, min_leaf)
    if split is None:
        return node
    node.feature, node.threshold = split
    mask = X[:, node.feature] <= node.threshold
    node.left = _build_tree(X[mask], y[mask], depth + 1, max_depth, min_leaf, max_features, rng)
    node.right = _build_tree(X[~mask], y[~mask], depth + 1, max_depth, min_leaf, max_features, rng)
    return node


def _tree_scores(node, X):
    scores = np.empty(X.shape[0])
    for row in range(X.shape[0]):
        cursor = node
        while cursor.left is not None:
            cursor = cursor.left if X[row, cursor.feature] <= cursor.threshold else cursor.right
        scores[row] = cursor.score
    return scores


class DecisionTreeClassifier(BaseEstimator):
    """Greedy Gini tree; leaf score is the leaf's positive fraction."""

    def __init__(self, max_depth: int = 10, min_leaf: int = 2):
        self.max_depth = max_depth
        self.min_leaf = min_leaf

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        self.root_ = _build_tree(X, y, 0, self.max_depth, self.min_leaf, None, None)
        return self

    def predict_score(self, X) -> np.ndarray:
        if not hasattr(self, "root_"):
            raise NotFittedError("fit must run first")
        return _tree_scores(self.root_, check_matrix(X))

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(np.int64)


class RandomForestClassifier(BaseEstimator):
    """Bootstrap ensemble of Gini trees with per-split feature subsets."""

    def __init__(
        self,
        n_estimators: int = 100,
        max_depth: int = 10,
        min_leaf: int = 2,
        max_features="sqrt",
        bootstrap: bool = True,
        seed: int = 0,
    ):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.seed = seed

    def _n_features_per_split(self, p):
        if self.max_features is None:
            return None
        if self.max_features == "sqrt":
            return max(1, int(np.sqrt(p)))
        return int(self.max_features)

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        k = self._n_features_per_split(X.shape[1])
        self.trees_ = []
        for t in range(self.n_estimators):
            rng = np.random.default_rng(mix_seed(self.seed, "tree", t))
            if self.bootstrap:
                idx = rng.integers(0, X.shape[0], size=X.shape[0])
                Xt, yt = X[idx], y[idx]
            else:
                Xt, yt = X, y
            self.trees_.append(
                _build_tree(Xt, yt, 0, self.max_depth, self.min_leaf, k, rng)
            )
        return self

    def predict_score(self, X) -> np.ndarray:
        if not hasattr(self, "trees_"):
            raise NotFittedError("fit must run first")
        X = check_matrix(X)
        return np.mean([_tree_scores(tree, X) for tree in self.trees_], axis=0)

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(np.int64)


MODEL_KINDS = {
    "KNN": KNeighborsClassifier,
    "LGR": LogisticRegression,
    "LDA": LinearDiscriminant,
    "DCT": DecisionTreeClassifier,
    "RFT": RandomForestClassifier,
}


def make_model(kind: str, seed: int = 0, **params):
    """Instantiate a model by its short name; ``seed`` reaches models that use it."""
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}; choose from {sorted(MODEL_KINDS)}")
    cls = MODEL_KINDS[kind]
    if "seed" in cls._param_names():
        params.setdefault("seed", seed)
    return cls(**params)


@dataclass
class EvalReport:
    """Threshold-0.5 accuracy, confusion counts, and the full ROC curve."""

    accuracy: float
    confusion: np.ndarray  # [[tn, fp], [fn, tp]]
    roc_points: np.ndarray  # (k, 2) of (fpr, tpr), monotone
    thresholds: np.ndarray  # threshold yielding each ROC point
    auc: float

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "confusion": np.asarray(self.confusion).tolist(),
            "roc_points": np.asarray(self.roc_points).tolist(),
            "thresholds": np.asarray(self.thresholds).tolist(),
            "auc": self.auc,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        return cls(
            accuracy=data["accuracy"],
            confusion=np.array(data["confusion"], dtype=np.int64),
            roc_points=np.array(data["roc_points"], dtype=np.float64).reshape(-1, 2),
            thresholds=np.array(data["thresholds"], dtype=np.float64),
            auc=data["auc"],
        )


def evaluate(scores, labels) -> EvalReport:
    """Accuracy, confusion matrix, ROC over all score thresholds, and AUC."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if scores.ndim != 1 or scores.shape != labels.shape or scores.size == 0:
        raise ValueError("scores and labels must be equal-length non-empty vectors")
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC undefined: labels contain a single class")

    predicted = scores >= 0.5
    tp = int(np.sum(predicted & (labels == 1)))
    tn = int(np.sum(~predicted & (labels == 0)))
    fp = n_neg - tn
    fn = n_pos - tp
    confusion = np.array([[tn, fp], [fn, tp]], dtype=np.int64)

    cut = np.unique(scores)[::-1]
    thresholds = np.concatenate([[np.inf], cut])
    points = np.empty((len(thresholds), 2))
    for row, thr in enumerate(thresholds):
        hit = scores >= thr
        points[row, 0] = np.sum(hit & (labels == 0)) / n_neg
        points[row, 1] = np.sum(hit & (labels == 1)) / n_pos
    auc = float(np.trapezoid(points[:, 1], points[:, 0]))
    return EvalReport(
        accuracy=float((tp + tn) / len(labels)),
        confusion=confusion,
        roc_points=points,
        thresholds=thresholds,
        auc=auc,
    )


def train_test_split(X, y, test_fraction: float, seed: int):
    """Stratified deterministic split; returns (X_train, X_test, y_train, y_test)."""
    X, y = check_X_y(X, y)
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    train_idx = []
    test_idx = []
    for value in np.unique(y):
        members = np.flatnonzero(y == value)
        if len(members) < 2:
            raise ValueError(f"class {value} has fewer than 2 members")
        order = rng.permutation(members)
        n_test = int(round(len(members) * test_fraction))
        n_test = min(max(n_test, 1), len(members) - 1)
        test_idx.append(order[:n_test])
        train_idx.append(order[n_test:])
    train_idx = np.concatenate(train_idx)
    test_idx = np.concatenate(test_idx)
    return X[train_idx], X[test_idx], y[train_idx], y[test_idx]


@dataclass
class CVResult:
    """Per-fold evaluation reports plus accuracy summary."""

    fold_reports: list = field(default_factory=list)

    @property
    def accuracies(self) -> np.ndarray:
        return np.array([r.accuracy for r in self.fold_reports])

    @property
    def mean_accuracy(self) -> float:
        return float(self.accuracies.mean())

    @property
    def std_accuracy(self) -> float:
        return float(self.accuracies.std())


def stratified_folds(y, k: int, seed: int) -> list[np.ndarray]:
    """Deterministic stratified partition into k folds (round-robin deal)."""
    y = np.asarray(y)
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(k)]
    for value in np.unique(y):
        members = np.flatnonzero(y == value)
        if len(members) < k:
            raise ValueError(f"class {value} has fewer than k={k} members")
        for pos, idx in enumerate(rng.permutation(members)):
            folds[pos % k].append(idx)
    return [np.sort(np.array(f, dtype=np.int64)) for f in folds]


def cross_validate(model, X, y, k: int = 5, seed: int = 0) -> CVResult:
    """Stratified k-fold CV; standardization is fit on each training fold only."""
    X, y = check_X_y(X, y)
    result = CVResult()
    for fold in stratified_folds(y, k, seed):
        mask = np.ones(len(y), dtype=bool)
        mask[fold] = False
        scaler = Standardizer().fit(X[mask])
        fitted = clone(model).fit(scaler.transform(X[mask]), y[mask])
        scores = fitted.predict_score(scaler.transform(X[fold]))
        result.fold_reports.append(evaluate(scores, y[fold]))
    return result
