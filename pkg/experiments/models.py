from dataclasses import dataclass, field

import numpy as np
from django.db import models

from classifiers.models import Algorithm
from core.exceptions import ConfigurationError
from scoring.models import Averaging


class Protocol(models.TextChoices):
    CV10 = "cv10", "10-fold cross-validation"
    HOLDOUT70 = "holdout70", "70/30 holdout"
    SPLIT602020 = "split602020", "60/20/20 train/test/validation"


class Stage(models.TextChoices):
    LOAD = "load", "Load"
    SPLIT = "split", "Split"
    REDUCE = "reduce", "PCA"
    FIT = "fit", "Fit"
    PREDICT = "predict", "Predict"


@dataclass(frozen=True)
class PcaSettings:
    enabled: bool = False
    variance_threshold: float = 0.95
    standardize: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str
    classifiers: tuple = tuple(Algorithm)
    protocol: str = Protocol.CV10
    pca: PcaSettings = PcaSettings()
    seed: int = 42
    overrides: dict = field(default_factory=dict)
    averaging: str = Averaging.MACRO
    folds: int = 10
    workers: int = 1

    def __post_init__(self):
        if not self.classifiers:
            raise ConfigurationError("at least one classifier is required")
        classifiers = tuple(Algorithm(name) for name in self.classifiers)
        # report rows follow the algorithm declaration order
        ordered = tuple(algorithm for algorithm in Algorithm if algorithm in classifiers)
        object.__setattr__(self, "classifiers", ordered)
        if not 0.0 < self.pca.variance_threshold <= 1.0:
            raise ConfigurationError(
                "variance threshold must lie in (0, 1], got %r" % self.pca.variance_threshold
            )
        if self.folds < 2:
            raise ConfigurationError("cross-validation needs at least 2 folds")
        if self.workers < 1:
            raise ConfigurationError("workers must be at least 1")

    @property
    def variant(self):
        return "pca" if self.pca.enabled else "full"


@dataclass(frozen=True, eq=False)
class FoldAudit:
    """What each fold's preprocessing was fitted on."""

    fold: int
    train_indices: np.ndarray
    test_indices: np.ndarray
    validation_indices: np.ndarray = None
    pca_mean: np.ndarray = None
    pca_scale: np.ndarray = None
    n_components: int = None


@dataclass(frozen=True)
class FoldResult:
    algorithm: str
    fold: int
    confusion: object
    metrics: object
    fit_seconds: float
    predict_seconds: float
    n_components: int = None
    flags: tuple = ()
    standardizer: object = None


@dataclass(frozen=True)
class ClassifierSummary:
    """Pooled-confusion metrics with the spread of the per-fold metrics."""

    algorithm: str
    confusion: object
    metrics: object
    fold_metrics: dict
    fit_seconds: float
    predict_seconds: float


@dataclass(frozen=True)
class EvaluationReport:
    config: ExperimentConfig
    dataset_name: str
    checksum: str
    n_rows: int
    class_list: tuple
    folds: tuple
    summaries: tuple
    audits: tuple
    timings: dict
    notices: tuple = ()

    def summary_for(self, algorithm):
        for summary in self.summaries:
            if summary.algorithm == Algorithm(algorithm):
                return summary
        raise KeyError(algorithm)

    def folds_for(self, algorithm):
        return [result for result in self.folds if result.algorithm == Algorithm(algorithm)]

    def component_counts(self):
        return [audit.n_components for audit in self.audits]

    @property
    def basename(self):
        return "%s_%s_metrics" % (self.config.dataset, self.config.variant)


@dataclass(frozen=True)
class FeatureRankingReport:
    dataset: str
    ranking: object
    top_n: int
    n_components: int
    variance_covered: float

    def __post_init__(self):
        object.__setattr__(self, "top_n", min(self.top_n, len(self.ranking)))

    def listing(self):
        return self.ranking.top(self.top_n)
