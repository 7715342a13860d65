import logging

import numpy as np

from core.exceptions import MetricsError
from core.utils.notices import NoticeLog
from core.utils.utils import getDictionaryOfLists
from scoring.models import (
    Averaging,
    ClassMetrics,
    ConfusionMatrix,
    F1Check,
    MetricsRecord,
    f1_score,
)
from scoring.published import published_rows
from websites.models import ClassLabel

logger = logging.getLogger(__name__)

F1_TOLERANCE = 0.1


def confusion(actual, predicted, class_list):
    actual = np.asarray(actual, dtype=np.int64)
    predicted = np.asarray(predicted, dtype=np.int64)
    if actual.shape != predicted.shape or actual.ndim != 1:
        raise MetricsError(
            "%d actual labels against %d predictions" % (actual.size, predicted.size)
        )
    if actual.size == 0:
        raise MetricsError("nothing to score")
    codes = np.array([int(label) for label in class_list], dtype=np.int64)
    for name, labels in (("actual", actual), ("predicted", predicted)):
        unknown = np.setdiff1d(labels, codes)
        if unknown.size:
            raise MetricsError(
                "%s label %d is outside the class list" % (name, int(unknown[0]))
            )
    lookup = {int(code): i for i, code in enumerate(codes)}
    rows = np.array([lookup[int(label)] for label in actual])
    cols = np.array([lookup[int(label)] for label in predicted])
    counts = np.zeros((codes.size, codes.size), dtype=np.int64)
    np.add.at(counts, (rows, cols), 1)
    return ConfusionMatrix(counts, tuple(class_list))


def _ratio(numerator, denominator, metric, notices, **context):
    if denominator == 0:
        notices.record(
            "undefined_metric",
            "%s is 0/0; reporting 0" % metric,
            metric=metric,
            **context,
        )
        return 0.0
    return numerator / denominator


def _one_vs_rest_record(cm, label, notices):
    tp, fp, fn, tn = cm.one_vs_rest(label)
    context = {"positive": ClassLabel(int(label)).label}
    return MetricsRecord.build(
        accuracy=cm.correct / cm.total,
        specificity=_ratio(tn, tn + fp, "specificity", notices, **context),
        precision=_ratio(tp, tp + fp, "precision", notices, **context),
        recall=_ratio(tp, tp + fn, "recall", notices, **context),
    )


def binary_metrics(cm, positive=ClassLabel.PHISHING, notices=None):
    """Five metrics of a two-class matrix, ``positive`` being the detected class."""
    notices = notices if notices is not None else NoticeLog()
    if cm.size != 2:
        raise MetricsError("binary metrics need a 2x2 matrix, got %dx%d" % (cm.size, cm.size))
    if cm.total == 0:
        raise MetricsError("empty confusion matrix")
    return _one_vs_rest_record(cm, positive, notices)


def class_metrics(cm, notices=None):
    """One-vs-rest metrics for every class of the matrix."""
    notices = notices if notices is not None else NoticeLog()
    if cm.total == 0:
        raise MetricsError("empty confusion matrix")
    return [
        ClassMetrics(
            label=label,
            support=int(cm.counts[i].sum()),
            record=_one_vs_rest_record(cm, label, notices),
        )
        for i, label in enumerate(cm.class_list)
    ]


def multiclass_metrics(cm, averaging=Averaging.MACRO, notices=None):
    """Averaged one-vs-rest metrics. Accuracy is always trace / N.

    Macro F1 is derived from the macro precision and recall.
    """
    notices = notices if notices is not None else NoticeLog()
    if cm.size < 2:
        raise MetricsError("multiclass metrics need at least two classes")
    if cm.total == 0:
        raise MetricsError("empty confusion matrix")
    accuracy = cm.correct / cm.total
    if Averaging(averaging) == Averaging.MACRO:
        records = [entry.record for entry in class_metrics(cm, notices)]
        return MetricsRecord.build(
            accuracy=accuracy,
            specificity=float(np.mean([r.specificity for r in records])),
            precision=float(np.mean([r.precision for r in records])),
            recall=float(np.mean([r.recall for r in records])),
        )
    pooled = np.array([cm.one_vs_rest(label) for label in cm.class_list]).sum(axis=0)
    tp, fp, fn, tn = (int(value) for value in pooled)
    return MetricsRecord.build(
        accuracy=accuracy,
        specificity=_ratio(tn, tn + fp, "specificity", notices, averaging="micro"),
        precision=_ratio(tp, tp + fp, "precision", notices, averaging="micro"),
        recall=_ratio(tp, tp + fn, "recall", notices, averaging="micro"),
    )


def score(cm, positive=ClassLabel.PHISHING, averaging=Averaging.MACRO, notices=None):
    """Binary metrics when the matrix has two classes including ``positive``."""
    if cm.size == 2 and ClassLabel(int(positive)) in cm.class_list:
        return binary_metrics(cm, positive, notices)
    return multiclass_metrics(cm, averaging, notices)


def mean_and_std(records):
    """Per-metric mean and sample standard deviation over fold records."""
    if not records:
        raise MetricsError("no records to aggregate")
    columns = getDictionaryOfLists(record.as_dict() for record in records)
    return {
        name: {
            "mean": float(np.mean(values)),
            "std": float(np.std(values, ddof=1)) if len(values) > 1 else 0.0,
        }
        for name, values in columns.items()
    }


def check_published_f1(tolerance=F1_TOLERANCE, dataset=None, reduced=None):
    """Recompute every published F1 from its precision and recall."""
    checks = []
    for row in published_rows(dataset, reduced):
        recomputed = f1_score(row.precision, row.recall)
        checks.append(
            F1Check(row=row, recomputed=recomputed, consistent=abs(recomputed - row.f1) <= tolerance)
        )
    inconsistent = [check for check in checks if not check.consistent]
    if inconsistent:
        logger.info(
            "%d of %d published rows have an F1 that does not follow from P and R",
            len(inconsistent),
            len(checks),
        )
    return checks
