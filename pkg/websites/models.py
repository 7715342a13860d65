from dataclasses import dataclass, field, replace

import numpy as np
from django.db import models

from core.exceptions import DatasetError, SplitError

# Datasets are plain immutable values; nothing here is stored in a database.


class ClassLabel(models.IntegerChoices):
    PHISHING = -1, "Phishing"
    SUSPICIOUS = 0, "Suspicious"
    LEGITIMATE = 1, "Legitimate"


# order used by summaries printed for people
DISPLAY_ORDER = (ClassLabel.PHISHING, ClassLabel.LEGITIMATE, ClassLabel.SUSPICIOUS)

CANONICAL_LABEL_COLUMN = "label"


class ValueDomain(models.TextChoices):
    CONTINUOUS = "continuous", "Continuous"
    TERNARY = "ternary", "Ternary (-1/0/1)"
    BINARY = "binary", "Binary (0/1)"

    @property
    def levels(self):
        if self == ValueDomain.TERNARY:
            return (-1, 0, 1)
        if self == ValueDomain.BINARY:
            return (0, 1)
        return None


@dataclass(frozen=True)
class DatasetDescriptor:
    id: str
    name: str
    feature_names: tuple
    value_domains: tuple
    label_mapping: dict
    label_column: str = CANONICAL_LABEL_COLUMN
    expected_rows: int = None
    reference_counts: dict = field(default_factory=dict)
    ignored_columns: tuple = ()
    provenance: str = ""

    def __post_init__(self):
        if len(self.feature_names) != len(self.value_domains):
            raise DatasetError(
                "%s: %d feature names but %d value domains"
                % (self.id, len(self.feature_names), len(self.value_domains))
            )
        if len(set(self.feature_names)) != len(self.feature_names):
            raise DatasetError("%s: duplicate feature names" % self.id)
        for label in self.label_mapping.values():
            if label not in ClassLabel.values:
                raise DatasetError("%s: unknown class label %r" % (self.id, label))

    @property
    def feature_count(self):
        return len(self.feature_names)

    @property
    def classes(self):
        return tuple(ClassLabel(value) for value in sorted(set(self.label_mapping.values())))

    def canonical_mapping(self):
        return {int(label): label for label in self.classes}

    def mapping_for(self, column_name):
        if column_name == CANONICAL_LABEL_COLUMN:
            return self.canonical_mapping()
        if column_name == self.label_column:
            return {int(raw): ClassLabel(label) for raw, label in self.label_mapping.items()}
        return None

    def derive(self, id, feature_names, value_domains, **changes):
        changes.setdefault("ignored_columns", ())
        return replace(
            self,
            id=id,
            feature_names=tuple(feature_names),
            value_domains=tuple(value_domains),
            **changes,
        )


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    values: np.ndarray
    labels: np.ndarray
    descriptor: DatasetDescriptor

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.int64)
        if values.ndim != 2:
            raise DatasetError("feature values must be a 2-D table")
        if values.shape[1] != self.descriptor.feature_count:
            raise DatasetError(
                "%s: matrix has %d columns, descriptor declares %d features"
                % (self.descriptor.id, values.shape[1], self.descriptor.feature_count)
            )
        if labels.shape != (values.shape[0],):
            raise DatasetError(
                "%d labels for %d rows" % (labels.size, values.shape[0])
            )
        if not np.isfinite(values).all():
            raise DatasetError("%s: non-finite feature value" % self.descriptor.id)
        if labels.size and not np.isin(labels, ClassLabel.values).all():
            raise DatasetError("%s: label outside the canonical encoding" % self.descriptor.id)
        values.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)

    @property
    def n_rows(self):
        return self.values.shape[0]

    @property
    def n_cols(self):
        return self.values.shape[1]

    def present_classes(self):
        return tuple(ClassLabel(int(value)) for value in np.unique(self.labels))

    def take(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        return FeatureMatrix(self.values[indices], self.labels[indices], self.descriptor)

    def with_values(self, values, descriptor):
        return FeatureMatrix(values, self.labels, descriptor)


class SplitKind(models.TextChoices):
    KFOLD = "kfold", "k-fold"
    HOLDOUT = "holdout", "Holdout"
    THREE_WAY = "three_way", "Train/test/validation"


class Partition(models.IntegerChoices):
    TRAIN = 0, "Train"
    TEST = 1, "Test"
    VALIDATION = 2, "Validation"


@dataclass(frozen=True, eq=False)
class SplitPlan:
    kind: str
    seed: int
    assignments: np.ndarray
    k: int = None
    fractions: tuple = ()

    def __post_init__(self):
        assignments = np.array(self.assignments, dtype=np.int64)
        if assignments.size and (assignments.min() < 0 or assignments.max() >= self.n_parts):
            raise SplitError("partition index out of range in split plan")
        assignments.setflags(write=False)
        object.__setattr__(self, "assignments", assignments)

    @property
    def n_rows(self):
        return self.assignments.size

    @property
    def n_parts(self):
        if self.kind == SplitKind.KFOLD:
            return self.k
        return len(self.fractions)

    def indices(self, part, exclude=False):
        if not 0 <= part < self.n_parts:
            raise SplitError(
                "partition selector %s out of range [0, %d)" % (part, self.n_parts)
            )
        mask = self.assignments == part
        if exclude:
            mask = ~mask
        return np.flatnonzero(mask)

    def part_sizes(self):
        return np.bincount(self.assignments, minlength=self.n_parts)
