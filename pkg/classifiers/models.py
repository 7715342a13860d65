from dataclasses import dataclass, field

import numpy as np
from django.db import models


class Algorithm(models.TextChoices):
    # declaration order is the row order of every report table
    DTREE = "dtree", "D-Tree"
    SVM = "svm", "SVM"
    RF = "rf", "RF"
    NB = "nb", "NB"
    KNN = "knn", "KNN"
    ANN = "ann", "ANN"


class Kernel(models.TextChoices):
    LINEAR = "linear", "Linear"
    RBF = "rbf", "Radial"
    POLY = "poly", "Polynomial"
    SIGMOID = "sigmoid", "Sigmoid"


class BayesVariant(models.TextChoices):
    GAUSSIAN = "gaussian", "Gaussian"
    CATEGORICAL = "categorical", "Categorical"


# Hyperparameter records. Defaults are the benchmark's fixed configuration.


@dataclass(frozen=True)
class Hyperparams:
    seed: int = 0


@dataclass(frozen=True)
class TreeParams(Hyperparams):
    max_depth: int = None
    min_samples_split: int = 2


@dataclass(frozen=True)
class ForestParams(Hyperparams):
    trees: int = 100
    bootstrap: bool = True
    feature_subsampling: bool = True
    max_depth: int = None
    min_samples_split: int = 2


@dataclass(frozen=True)
class BayesParams(Hyperparams):
    variant: str = BayesVariant.GAUSSIAN
    alpha: float = 1.0
    var_floor: float = 1e-9


@dataclass(frozen=True)
class NeighborsParams(Hyperparams):
    k: int = 5


@dataclass(frozen=True)
class SvmParams(Hyperparams):
    C: float = 1.0
    kernel: str = Kernel.RBF
    gamma: float = None
    degree: int = 3
    coef0: float = 0.0
    tol: float = 1e-3
    max_passes: int = 5
    max_iter: int = None


@dataclass(frozen=True)
class NetworkParams(Hyperparams):
    hidden: int = 64
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    batch_size: int = 32
    epochs: int = 100


PARAMS_BY_ALGORITHM = {
    Algorithm.DTREE: TreeParams,
    Algorithm.SVM: SvmParams,
    Algorithm.RF: ForestParams,
    Algorithm.NB: BayesParams,
    Algorithm.KNN: NeighborsParams,
    Algorithm.ANN: NetworkParams,
}

# scale-sensitive learners see z-scored inputs
STANDARDIZED_ALGORITHMS = (Algorithm.SVM, Algorithm.KNN, Algorithm.ANN)


@dataclass(frozen=True, eq=False)
class Standardizer:
    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, values):
        mean = values.mean(axis=0)
        scale = values.std(axis=0)
        scale = np.where(scale > 0, scale, 1.0)
        return cls(mean=mean, scale=scale)

    def apply(self, values):
        return (values - self.mean) / self.scale


@dataclass(frozen=True, eq=False)
class ConstantState:
    class_index: int = 0


@dataclass(frozen=True, eq=False)
class TrainedClassifier:
    algorithm: str
    params: Hyperparams
    class_list: tuple
    n_features: int
    state: object
    standardizer: Standardizer = None
    flags: tuple = ()

    @property
    def is_constant(self):
        return isinstance(self.state, ConstantState)

    def class_codes(self):
        return np.array([int(label) for label in self.class_list], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class PredictionVector:
    labels: np.ndarray
    scores: np.ndarray = None
    probabilistic: bool = False
    class_list: tuple = field(default=())

    def __len__(self):
        return self.labels.size
