"""Topological versus statistical feature engineering for stochastic-process
time-series classification: process simulation, delay embedding, Rips
persistence, diagram and raw-series features, from-scratch classifiers, and
experiment drivers."""

__version__ = "0.1.0"

from .base import BaseEstimator, NotFittedError, clone
from .simulate import (
    CAUCHY,
    WIENER,
    LabeledDataset,
    TimeSeries,
    generate_dataset,
    mix_seed,
    sample_cauchy,
    sample_wiener,
)
from .embedding import (
    EmbeddingParams,
    TakensEmbedding,
    delay_embed,
    false_nearest_fraction,
    mutual_information,
    optimal_delay,
    optimal_dimension,
)
from .persistence import (
    PersistenceDiagram,
    enclosing_radius,
    naive_reduction_oracle,
    pairwise_distances,
    rips_diagram,
    write_diagrams_csv,
)
from .diagram_features import (
    TopologicalFeatureVector,
    adcock_carlsson,
    betti_curve,
    betti_l1,
    bottleneck_distance,
    bottleneck_to_diagonal,
    compute_topological_features,
    landscape_eval,
    landscape_l1,
    persistence_entropy,
    wasserstein_distance,
    wasserstein_to_diagonal,
)
from .stat_features import (
    StatFeatureVector,
    hurst_exponent,
    kpss_statistic,
    spectral_entropy,
    stat_feature_vector,
)
from .featurize import (
    RawFeatures,
    StatisticalFeatures,
    TopologicalFeatures,
    topological_feature_vector,
)
from .classify import (
    CVResult,
    DecisionTreeClassifier,
    EvalReport,
    KNeighborsClassifier,
    LinearDiscriminant,
    LogisticRegression,
    MODEL_KINDS,
    RandomForestClassifier,
    Standardizer,
    cross_validate,
    evaluate,
    make_model,
    train_test_split,
)
from .experiment import (
    ExperimentConfig,
    ExperimentReport,
    bench_featurization,
    feature_distance_heatmap,
    run_balanced,
    run_unbalanced,
)
