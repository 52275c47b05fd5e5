"""Command-line entry points.

Subcommands (each takes ``--config <json>`` plus overrides):

* ``simulate``   — write the dataset CSV and its JSON manifest
* ``featurize``  — write a feature CSV for one feature set
* ``classify``   — split/CV metrics for the configured models, report JSON
* ``experiment balanced|unbalanced`` — the full studies with plot data
* ``bench``      — serial/parallel featurization timing table

Exit status is nonzero on any error; the active config is echoed into every
report for provenance.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiment import (
    ExperimentConfig,
    ExperimentReport,
    bench_featurization,
    canonical_feature_set,
    run_balanced,
    run_unbalanced,
    _study,
    _versions,
    _write_features_csv,
    feature_names,
    make_featurizer,
)
from .simulate import generate_dataset, mix_seed


def _load_config(args) -> ExperimentConfig:
    config = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["master_seed"] = args.seed
    if getattr(args, "parallel", None) is not None:
        overrides["n_jobs"] = args.parallel
    if getattr(args, "feature_set", None):
        overrides["feature_sets"] = [canonical_feature_set(fs) for fs in args.feature_set]
    if overrides:
        config = ExperimentConfig.from_dict({**config.to_dict(), **overrides})
    return config


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _add_common(parser, feature_set=True):
    parser.add_argument("--config", help="JSON config mirroring ExperimentConfig")
    parser.add_argument("--seed", type=int, help="override master seed")
    parser.add_argument("--out-dir", default="out", help="output directory")
    parser.add_argument("--parallel", type=int, help="worker processes for featurization")
    if feature_set:
        parser.add_argument(
            "--feature-set",
            action="append",
            choices=["raw", "stat", "statistical", "topo", "topological"],
            help="restrict to one or more feature sets (repeatable)",
        )


def cmd_simulate(args) -> int:
    config = _load_config(args)
    out = _out_dir(args)
    dataset = generate_dataset(config.counts, config.n_steps, config.t_max, config.master_seed)
    dataset.save(out / "dataset.csv", out / "dataset.manifest.json")
    print(f"wrote {out / 'dataset.csv'} ({len(dataset)} series)")
    return 0


def cmd_featurize(args) -> int:
    config = _load_config(args)
    out = _out_dir(args)
    dataset = generate_dataset(config.counts, config.n_steps, config.t_max, config.master_seed)
    for fs in config.feature_sets:
        X = make_featurizer(fs, config).fit_transform(dataset)
        path = out / f"features_{fs}.csv"
        _write_features_csv(path, X, dataset.labels, feature_names(fs, config.n_steps))
        print(f"wrote {path} ({X.shape[0]} x {X.shape[1]})")
    return 0


def cmd_classify(args) -> int:
    config = _load_config(args)
    out = _out_dir(args)
    dataset = generate_dataset(config.counts, config.n_steps, config.t_max, config.master_seed)
    _, _, cv_block, test_block, class_means, embedding_params = _study(
        config, dataset, out, tag=""
    )
    report = ExperimentReport(
        config=config.to_dict(),
        versions=_versions(),
        seeds={
            "master_seed": config.master_seed,
            "split_seed": mix_seed(config.master_seed, "split"),
            "cv_seed": mix_seed(config.master_seed, "cv"),
        },
        kind="classify",
        cv=cv_block,
        test=test_block,
        class_mean_distances=class_means,
        embedding_params=embedding_params,
    )
    report.save(out / "report.json")
    for fs in config.feature_sets:
        for kind in config.models:
            cell = cv_block[fs][kind]
            print(f"{fs:12s} {kind}: cv acc {cell['mean']:.3f} +/- {cell['std']:.3f}")
    print(f"wrote {out / 'report.json'}")
    return 0


def cmd_experiment(args) -> int:
    config = _load_config(args)
    out = _out_dir(args)
    runner = run_balanced if args.study == "balanced" else run_unbalanced
    report = runner(config, out_dir=out)
    if args.study == "balanced":
        for fs in config.feature_sets:
            for kind in config.models:
                cell = report.cv[fs][kind]
                print(f"{fs:12s} {kind}: cv acc {cell['mean']:.3f} +/- {cell['std']:.3f}")
    else:
        for fs, rows in report.auc_by_fraction.items():
            for fraction, auc in rows:
                print(f"{fs:12s} minority {fraction:5.2%}: AUC {auc:.3f}")
    print(f"wrote {out / 'report.json'}")
    return 0


def cmd_bench(args) -> int:
    config = _load_config(args)
    out = _out_dir(args)
    results = bench_featurization(
        n_series=args.n_series,
        repeats=args.repeats,
        n_jobs=config.n_jobs if config.n_jobs > 1 else None,
        master_seed=config.master_seed,
        config=config,
        out_dir=out,
    )
    for key, row in results["timings"].items():
        print(f"{key:24s} mean {row['mean_s']:8.3f}s  std {row['std_s']:.3f}s")
    print(f"features identical across modes: {results['features_identical_across_modes']}")
    print(f"wrote {out / 'timing.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tstopo",
        description="Stochastic-process time-series classification with topological features",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a labeled dataset CSV")
    _add_common(p, feature_set=False)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("featurize", help="extract feature CSVs")
    _add_common(p)
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("classify", help="train and evaluate the configured models")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("experiment", help="run a full study")
    p.add_argument("study", choices=["balanced", "unbalanced"])
    _add_common(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("bench", help="serial vs parallel featurization timing")
    _add_common(p, feature_set=False)
    p.add_argument("--n-series", type=int, default=50)
    p.add_argument("--repeats", type=int, default=7)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # surface a clean message, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
