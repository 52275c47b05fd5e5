"""End-to-end studies: balanced/unbalanced classification and a featurization benchmark.

``run_balanced`` and ``run_unbalanced`` drive the full pipeline — simulate,
featurize (raw / statistical / topological), split, cross-validate, evaluate —
and return a JSON-serializable report; with an output directory they also
emit plot data (features, ROC and confusion tables, distance/correlation
heatmaps) as CSV. ``bench_featurization`` times serial versus process-parallel
feature extraction and checks that both modes produce bit-identical values.

The positive class of every binary metric is the minority class (Cauchy when
counts are tied, matching the unbalanced study design).
"""

from __future__ import annotations

import csv
import json
import os
import platform
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .classify import (
    EvalReport,
    Standardizer,
    cross_validate,
    evaluate,
    make_model,
    train_test_split,
    MODEL_KINDS,
)
from .featurize import RawFeatures, StatisticalFeatures, TopologicalFeatures
from .persistence import pairwise_distances
from .simulate import CAUCHY, LabeledDataset, generate_dataset, mix_seed

FEATURE_SETS = ("raw", "statistical", "topological")
_FEATURE_ALIASES = {"stat": "statistical", "topo": "topological"}


def canonical_feature_set(name: str) -> str:
    name = _FEATURE_ALIASES.get(name, name)
    if name not in FEATURE_SETS:
        raise ValueError(f"unknown feature set {name!r}; choose from {FEATURE_SETS}")
    return name


@dataclass
class ExperimentConfig:
    """Full parameterization of a study; round-trips through JSON."""

    counts: dict = field(default_factory=lambda: {"Wiener": 200, "Cauchy": 200})
    n_steps: int = 500
    t_max: float = 2.0
    master_seed: int = 0
    embed_tau: int | str = "auto"
    embed_dim: int | str = "auto"
    tau_max: int = 20
    mi_bins: int = 16
    fnn_r_tol: float = 10.0
    fnn_a_tol: float = 2.0
    fnn_threshold: float = 0.01
    d_max: int = 10
    rips_threshold: float | str = "enclosing"
    feature_sets: list = field(default_factory=lambda: list(FEATURE_SETS))
    models: list = field(default_factory=lambda: ["KNN", "LGR", "LDA", "DCT", "RFT"])
    model_params: dict = field(default_factory=dict)
    cv_folds: int = 5
    test_fraction: float = 0.2
    minority_fractions: list = field(default_factory=lambda: [0.01, 0.02, 0.05, 0.10, 0.20])
    stat_window: int = 50
    n_jobs: int = 1
    designated_model: str = "KNN"

    def __post_init__(self):
        self.feature_sets = [canonical_feature_set(fs) for fs in self.feature_sets]
        if not self.feature_sets:
            raise ValueError("at least one feature set required")
        if not self.models:
            raise ValueError("at least one model required")
        for kind in list(self.models) + [self.designated_model]:
            if kind not in MODEL_KINDS:
                raise ValueError(f"unknown model kind {kind!r}")
        if not all(0 < f <= 1 for f in self.minority_fractions):
            raise ValueError("minority fractions must lie in (0, 1]")
        if not 0 < self.test_fraction < 1:
            raise ValueError("test_fraction must lie in (0, 1)")
        if self.cv_folds < 2:
            raise ValueError("cv_folds must be >= 2")
        if self.n_jobs < 1:
            raise ValueError("n_jobs must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class ExperimentReport:
    """Everything a study produced, JSON-serializable without loss."""

    config: dict
    versions: dict
    seeds: dict
    kind: str = "balanced"
    cv: dict = field(default_factory=dict)
    test: dict = field(default_factory=dict)
    class_mean_distances: dict = field(default_factory=dict)
    embedding_params: list | None = None
    auc_by_fraction: dict = field(default_factory=dict)
    per_fraction: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        return cls(**data)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))

    @classmethod
    def load(cls, path) -> "ExperimentReport":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _versions() -> dict:
    import numba

    return {
        "tstopo": __version__,
        "numpy": np.__version__,
        "numba": numba.__version__,
        "python": platform.python_version(),
    }


def positive_label(labels: list[str]) -> str:
    """Minority class; ties prefer Cauchy, then the lexicographically last label."""
    counts: dict[str, int] = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    low = min(counts.values())
    tied = sorted(lab for lab, c in counts.items() if c == low)
    return CAUCHY if CAUCHY in tied else tied[-1]


def binary_labels(labels: list[str]) -> tuple[np.ndarray, str]:
    pos = positive_label(labels)
    return np.array([1 if lab == pos else 0 for lab in labels], dtype=np.int64), pos


def make_featurizer(feature_set: str, config: ExperimentConfig):
    feature_set = canonical_feature_set(feature_set)
    if feature_set == "raw":
        return RawFeatures()
    if feature_set == "statistical":
        return StatisticalFeatures(window=config.stat_window, n_jobs=config.n_jobs)
    return TopologicalFeatures(
        tau=config.embed_tau,
        dim=config.embed_dim,
        tau_max=config.tau_max,
        n_bins=config.mi_bins,
        r_tol=config.fnn_r_tol,
        a_tol=config.fnn_a_tol,
        fnn_threshold=config.fnn_threshold,
        d_max=config.d_max,
        threshold=config.rips_threshold,
        n_jobs=config.n_jobs,
    )


def feature_names(feature_set: str, n_steps: int) -> list[str]:
    feature_set = canonical_feature_set(feature_set)
    if feature_set == "raw":
        return [f"x{t}" for t in range(n_steps)]
    if feature_set == "statistical":
        return StatisticalFeatures.feature_names()
    return TopologicalFeatures.feature_names()


def feature_distance_heatmap(X) -> tuple[np.ndarray, np.ndarray]:
    """Row-distance and column-correlation matrices of a feature matrix.

    Rows should arrive class-contiguous (the dataset order) so the block
    structure of intra- versus inter-class distances is visible. Zero-variance
    columns get correlation 0 off the diagonal.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("need a 2-D matrix with at least 2 rows")
    dist = pairwise_distances(X)
    centered = X - X.mean(axis=0)
    cov = centered.T @ centered / X.shape[0]
    std = np.sqrt(np.diag(cov))
    denom = np.outer(std, std)
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.where(denom > 0, cov / np.where(denom > 0, denom, 1.0), 0.0)
    np.fill_diagonal(corr, 1.0)
    return dist, corr


def _class_mean_distances(Z, labels) -> dict:
    order = sorted(set(labels))
    means = np.array([Z[np.array(labels) == lab].mean(axis=0) for lab in order])
    return {"labels": order, "matrix": pairwise_distances(means).tolist()}


def _evaluate_grid(config, features, y, split_seed, cv_seed):
    """CV + held-out-test metrics for every (feature set, model) cell."""
    cv_block: dict = {}
    test_block: dict = {}
    for fs, X in features.items():
        cv_block[fs] = {}
        test_block[fs] = {}
        X_tr, X_te, y_tr, y_te = train_test_split(X, y, config.test_fraction, split_seed)
        scaler = Standardizer().fit(X_tr)
        Z_tr, Z_te = scaler.transform(X_tr), scaler.transform(X_te)
        for kind in config.models:
            model = make_model(
                kind,
                seed=mix_seed(config.master_seed, "model", kind),
                **config.model_params.get(kind, {}),
            )
            result = cross_validate(model, X, y, k=config.cv_folds, seed=cv_seed)
            cv_block[fs][kind] = {
                "mean": result.mean_accuracy,
                "std": result.std_accuracy,
                "folds": result.accuracies.tolist(),
            }
            fitted = make_model(
                kind,
                seed=mix_seed(config.master_seed, "model", kind),
                **config.model_params.get(kind, {}),
            ).fit(Z_tr, y_tr)
            test_block[fs][kind] = evaluate(fitted.predict_score(Z_te), y_te).to_dict()
    return cv_block, test_block


def _study(config: ExperimentConfig, dataset: LabeledDataset, out_dir, tag: str):
    """Common pipeline for one dataset: features, metrics, plot data."""
    y, pos = binary_labels(dataset.labels)
    features: dict[str, np.ndarray] = {}
    embedding_params = None
    for fs in config.feature_sets:
        featurizer = make_featurizer(fs, config)
        features[fs] = featurizer.fit_transform(dataset)
        if fs == "topological":
            embedding_params = [list(p) for p in featurizer.embedding_params_]

    split_seed = mix_seed(config.master_seed, "split")
    cv_seed = mix_seed(config.master_seed, "cv")
    cv_block, test_block = _evaluate_grid(config, features, y, split_seed, cv_seed)

    class_means = {}
    for fs, X in features.items():
        Z = Standardizer().fit_transform(X)
        class_means[fs] = _class_mean_distances(Z, dataset.labels)
        if out_dir is not None:
            _write_features_csv(
                Path(out_dir) / f"features_{fs}{tag}.csv",
                X,
                dataset.labels,
                feature_names(fs, config.n_steps),
            )
            if fs != "raw":
                dist, corr = feature_distance_heatmap(Z)
                _write_matrix_csv(Path(out_dir) / f"heatmap_distance_{fs}{tag}.csv", dist)
                _write_matrix_csv(
                    Path(out_dir) / f"heatmap_correlation_{fs}{tag}.csv",
                    corr,
                    header=feature_names(fs, config.n_steps),
                )

    if out_dir is not None:
        for fs in config.feature_sets:
            report = EvalReport.from_dict(test_block[fs][config.designated_model])
            _write_roc_csv(Path(out_dir) / f"roc_{fs}{tag}.csv", report)
            _write_confusion_csv(Path(out_dir) / f"confusion_{fs}{tag}.csv", report, pos)
    return y, features, cv_block, test_block, class_means, embedding_params


def run_balanced(config: ExperimentConfig, out_dir=None) -> ExperimentReport:
    """The balanced study: equal class counts, full model-by-feature-set grid."""
    counts = set(config.counts.values())
    if len(counts) != 1:
        raise ValueError(f"balanced study needs equal class counts, got {config.counts}")
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
    dataset = generate_dataset(config.counts, config.n_steps, config.t_max, config.master_seed)
    _, _, cv_block, test_block, class_means, embedding_params = _study(
        config, dataset, out_dir, tag=""
    )
    report = ExperimentReport(
        config=config.to_dict(),
        versions=_versions(),
        seeds={
            "master_seed": config.master_seed,
            "split_seed": mix_seed(config.master_seed, "split"),
            "cv_seed": mix_seed(config.master_seed, "cv"),
        },
        kind="balanced",
        cv=cv_block,
        test=test_block,
        class_mean_distances=class_means,
        embedding_params=embedding_params,
    )
    if out_dir is not None:
        report.save(Path(out_dir) / "report.json")
    return report


def run_unbalanced(config: ExperimentConfig, out_dir=None) -> ExperimentReport:
    """The unbalanced sweep: minority count = fraction * majority count."""
    if len(config.counts) != 2:
        raise ValueError("unbalanced study needs exactly two classes")
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
    (maj_label, maj_count), (min_label, _) = sorted(
        config.counts.items(), key=lambda kv: kv[1], reverse=True
    )
    auc_table: dict[str, list] = {fs: [] for fs in config.feature_sets}
    per_fraction: dict = {}
    for fraction in config.minority_fractions:
        n_min = max(1, int(round(fraction * maj_count)))
        sub = ExperimentConfig.from_dict(
            {**config.to_dict(), "counts": {maj_label: maj_count, min_label: n_min}}
        )
        dataset = generate_dataset(sub.counts, sub.n_steps, sub.t_max, sub.master_seed)
        tag = f"_frac{fraction:g}"
        _, _, cv_block, test_block, class_means, embedding_params = _study(
            sub, dataset, out_dir, tag=tag
        )
        for fs in config.feature_sets:
            auc_table[fs].append([fraction, test_block[fs][config.designated_model]["auc"]])
        per_fraction[f"{fraction:g}"] = {
            "counts": sub.counts,
            "cv": cv_block,
            "test": test_block,
            "class_mean_distances": class_means,
            "embedding_params": embedding_params,
        }
    report = ExperimentReport(
        config=config.to_dict(),
        versions=_versions(),
        seeds={"master_seed": config.master_seed},
        kind="unbalanced",
        auc_by_fraction=auc_table,
        per_fraction=per_fraction,
    )
    if out_dir is not None:
        report.save(Path(out_dir) / "report.json")
        _write_auc_table_csv(Path(out_dir) / "auc_by_fraction.csv", auc_table)
    return report


def bench_featurization(
    n_series: int = 50,
    length_range: tuple = (500, 1500),
    repeats: int = 7,
    modes: tuple = ("serial", "parallel"),
    n_jobs: int | None = None,
    master_seed: int = 0,
    t_max: float = 2.0,
    config: ExperimentConfig | None = None,
    out_dir=None,
) -> dict:
    """Wall-clock timing of topological and statistical extraction per mode.

    Samples Cauchy series with lengths uniform over ``length_range``, then for
    each repeat and mode times both feature kinds over the whole batch.
    Feature values are checked to be bit-identical across modes; timings
    include worker-pool startup (an untimed warmup primes the JIT cache).
    """
    if n_jobs is None:
        n_jobs = os.cpu_count() or 1
    if config is None:
        config = ExperimentConfig()
    from .simulate import sample_cauchy

    rng = np.random.default_rng(mix_seed(master_seed, "bench-lengths"))
    lengths = rng.integers(length_range[0], length_range[1] + 1, size=n_series)
    series = [
        sample_cauchy(int(n), t_max, mix_seed(master_seed, "bench-series", i))
        for i, n in enumerate(lengths)
    ]

    def featurizers(jobs):
        cfg = ExperimentConfig.from_dict({**config.to_dict(), "n_jobs": jobs})
        return {
            "topological": make_featurizer("topological", cfg),
            "statistical": make_featurizer("statistical", cfg),
        }

    warm = featurizers(min(2, n_jobs))
    warm["topological"].transform(series[:2])
    if "parallel" in modes and n_jobs > 1:
        featurizers(n_jobs)["topological"].transform(series[:2])

    results: dict = {"n_jobs": n_jobs, "lengths": lengths.tolist(), "timings": {}}
    reference: dict[str, np.ndarray] = {}
    identical = True
    for mode in modes:
        jobs = 1 if mode == "serial" else n_jobs
        batch = featurizers(jobs)
        for kind in ("topological", "statistical"):
            times = []
            for _ in range(repeats):
                start = time.perf_counter()
                values = batch[kind].transform(series)
                times.append(time.perf_counter() - start)
            if kind in reference:
                identical = identical and bool(np.array_equal(reference[kind], values))
            else:
                reference[kind] = values
            times = np.array(times)
            results["timings"][f"{kind}/{mode}"] = {
                "mean_s": float(times.mean()),
                "std_s": float(times.std()),
                "times_s": times.tolist(),
            }
    results["features_identical_across_modes"] = identical
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        _write_timing_csv(Path(out_dir) / "timing.csv", results)
        (Path(out_dir) / "bench.json").write_text(json.dumps(results, indent=2))
    return results


def _write_features_csv(path, X, labels, names) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series_id", "label"] + list(names))
        for sid, (label, row) in enumerate(zip(labels, X)):
            writer.writerow([sid, label] + [repr(float(v)) for v in row])


def _write_matrix_csv(path, matrix, header=None) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        if header is not None:
            writer.writerow(header)
        for row in np.asarray(matrix):
            writer.writerow([repr(float(v)) for v in row])


def _write_roc_csv(path, report: EvalReport) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["fpr", "tpr", "threshold"])
        for (fpr, tpr), thr in zip(report.roc_points, report.thresholds):
            writer.writerow([repr(float(fpr)), repr(float(tpr)), repr(float(thr))])


def _write_confusion_csv(path, report: EvalReport, pos_label: str) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["", "pred_negative", f"pred_positive({pos_label})"])
        writer.writerow(["true_negative", report.confusion[0, 0], report.confusion[0, 1]])
        writer.writerow(["true_positive", report.confusion[1, 0], report.confusion[1, 1]])


def _write_auc_table_csv(path, auc_table: dict) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature_set", "minority_fraction", "auc"])
        for fs, rows in auc_table.items():
            for fraction, auc in rows:
                writer.writerow([fs, fraction, repr(float(auc))])


def _write_timing_csv(path, results: dict) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["features", "mode", "mean_s", "std_s"] + [
            f"t{r}_s" for r in range(len(next(iter(results["timings"].values()))["times_s"]))
        ])
        for key, row in results["timings"].items():
            kind, mode = key.split("/")
            writer.writerow(
                [kind, mode, repr(row["mean_s"]), repr(row["std_s"])]
                + [repr(t) for t in row["times_s"]]
            )
