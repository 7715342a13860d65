from dataclasses import dataclass

import numpy as np

from websites.models import DatasetDescriptor


@dataclass(frozen=True, eq=False)
class PcaModel:
    """Principal axes of a training matrix.

    ``mean``, ``scale`` and the columns of ``components`` cover only the
    kept (non-degenerate) features listed in ``kept_indices``;
    ``column_means`` spans the full input width so reconstructions can
    restore dropped columns.
    """

    mean: np.ndarray
    scale: np.ndarray
    components: np.ndarray
    eigenvalues: np.ndarray
    explained_variance_ratio: np.ndarray
    standardized: bool
    kept_indices: np.ndarray
    column_means: np.ndarray
    descriptor: DatasetDescriptor
    n_samples: int

    def __post_init__(self):
        for name in (
            "mean",
            "scale",
            "components",
            "eigenvalues",
            "explained_variance_ratio",
            "kept_indices",
            "column_means",
        ):
            array = np.array(getattr(self, name))
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @property
    def n_components(self):
        return self.components.shape[0]

    @property
    def n_features(self):
        return self.descriptor.feature_count

    @property
    def dropped_indices(self):
        return np.setdiff1d(np.arange(self.n_features), self.kept_indices)

    def cumulative_variance(self):
        return np.cumsum(self.explained_variance_ratio)


@dataclass(frozen=True)
class RankedFeature:
    name: str
    index: int
    score: float


@dataclass(frozen=True)
class FeatureRanking:
    entries: tuple
    dropped: tuple = ()
    k: int = None
    weighted: bool = False

    def __len__(self):
        return len(self.entries)

    def top(self, n):
        return self.entries[:n]

    def names(self):
        return [entry.name for entry in self.entries]
