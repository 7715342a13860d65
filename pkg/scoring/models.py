from dataclasses import dataclass, fields

import numpy as np
from django.db import models

from core.exceptions import MetricsError
from core.utils.utils import formatPercent
from websites.models import ClassLabel


class Averaging(models.TextChoices):
    MACRO = "macro", "Macro"
    MICRO = "micro", "Micro"


METRIC_LABELS = {
    "accuracy": "Accuracy",
    "specificity": "Specificity",
    "precision": "Precision",
    "recall": "Recall",
    "f1": "F1 Score",
}


def f1_score(precision, recall):
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Counts with actual classes on rows and predicted classes on columns."""

    counts: np.ndarray
    class_list: tuple

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        classList = tuple(ClassLabel(int(label)) for label in self.class_list)
        if counts.shape != (len(classList), len(classList)):
            raise MetricsError(
                "confusion counts of shape %s do not match %d classes"
                % (counts.shape, len(classList))
            )
        if (counts < 0).any():
            raise MetricsError("confusion counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "class_list", classList)

    @property
    def size(self):
        return len(self.class_list)

    @property
    def total(self):
        return int(self.counts.sum())

    @property
    def correct(self):
        return int(np.trace(self.counts))

    def index(self, label):
        try:
            return self.class_list.index(ClassLabel(int(label)))
        except ValueError:
            raise MetricsError("%s is not among the matrix classes" % label)

    def one_vs_rest(self, label):
        """``(tp, fp, fn, tn)`` with ``label`` as the positive class."""
        i = self.index(label)
        tp = int(self.counts[i, i])
        fp = int(self.counts[:, i].sum()) - tp
        fn = int(self.counts[i, :].sum()) - tp
        return tp, fp, fn, self.total - tp - fp - fn

    def __add__(self, other):
        if tuple(other.class_list) != self.class_list:
            raise MetricsError("cannot pool confusion matrices over different classes")
        return ConfusionMatrix(self.counts + other.counts, self.class_list)

    def __eq__(self, other):
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return self.class_list == other.class_list and np.array_equal(self.counts, other.counts)

    __hash__ = None


@dataclass(frozen=True)
class MetricsRecord:
    accuracy: float
    specificity: float
    precision: float
    recall: float
    f1: float

    @classmethod
    def build(cls, accuracy, specificity, precision, recall):
        return cls(
            accuracy=float(accuracy),
            specificity=float(specificity),
            precision=float(precision),
            recall=float(recall),
            f1=f1_score(float(precision), float(recall)),
        )

    @classmethod
    def names(cls):
        return tuple(field.name for field in fields(cls))

    def as_dict(self):
        return {name: getattr(self, name) for name in self.names()}

    def as_percentages(self):
        return {name: formatPercent(getattr(self, name)) for name in self.names()}


@dataclass(frozen=True)
class ClassMetrics:
    label: ClassLabel
    support: int
    record: MetricsRecord


@dataclass(frozen=True)
class PublishedRow:
    """A published result row, metrics in percent as printed."""

    dataset: str
    reduced: bool
    algorithm: str
    accuracy: float
    specificity: float
    precision: float
    recall: float
    f1: float

    def recomputed_f1(self):
        return f1_score(self.precision, self.recall)


@dataclass(frozen=True)
class F1Check:
    row: PublishedRow
    recomputed: float
    consistent: bool

    @property
    def difference(self):
        return abs(self.recomputed - self.row.f1)
