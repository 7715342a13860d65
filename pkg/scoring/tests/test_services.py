import itertools

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import MetricsError
from core.utils.notices import NoticeLog
from scoring.models import Averaging, ConfusionMatrix, MetricsRecord, f1_score
from scoring.services import (
    binary_metrics,
    check_published_f1,
    class_metrics,
    confusion,
    mean_and_std,
    multiclass_metrics,
    score,
)
from websites.models import ClassLabel

P = ClassLabel.PHISHING
L = ClassLabel.LEGITIMATE
S = ClassLabel.SUSPICIOUS


def assert_f1_identity(testcase, record):
    testcase.assertAlmostEqual(record.f1, f1_score(record.precision, record.recall), delta=1e-9)


class ConfusionTest(SimpleTestCase):
    def test_all_correct_is_diagonal(self):
        cm = confusion([P, L, L, P, P], [P, L, L, P, P], (P, L))
        np.testing.assert_array_equal(cm.counts, [[3, 0], [0, 2]])

    def test_hand_case(self):
        cm = confusion([P, P, L], [P, L, L], (P, L))
        np.testing.assert_array_equal(cm.counts, [[1, 1], [0, 1]])
        self.assertEqual(cm.total, 3)
        self.assertEqual(cm.correct, 2)

    def test_three_classes_against_counting(self):
        actual = [P, S, L, P]
        predicted = [P, S, P, L]
        classList = (P, S, L)
        cm = confusion(actual, predicted, classList)
        for (i, a), (j, b) in itertools.product(enumerate(classList), repeat=2):
            expected = sum(1 for x, y in zip(actual, predicted) if x == a and y == b)
            self.assertEqual(cm.counts[i, j], expected)

    def test_errors(self):
        with self.assertRaises(MetricsError):
            confusion([P, L], [P], (P, L))
        with self.assertRaises(MetricsError):
            confusion([P, S], [P, L], (P, L))
        with self.assertRaises(MetricsError):
            confusion([], [], (P, L))

    def test_pooling(self):
        first = confusion([P, L], [P, P], (P, L))
        second = confusion([L, L], [L, P], (P, L))
        pooled = first + second
        np.testing.assert_array_equal(pooled.counts, [[1, 0], [2, 1]])
        with self.assertRaises(MetricsError):
            first + confusion([P, S], [P, S], (P, S))

    def test_rejects_negative_counts(self):
        with self.assertRaises(MetricsError):
            ConfusionMatrix([[1, -1], [0, 1]], (P, L))


class BinaryMetricsTest(SimpleTestCase):
    def test_perfect_predictions(self):
        record = binary_metrics(confusion([P, L, P], [P, L, P], (P, L)))
        self.assertEqual(record, MetricsRecord(1.0, 1.0, 1.0, 1.0, 1.0))

    def test_counts(self):
        # TP=3 FN=1 FP=2 TN=4 with phishing as the positive class
        cm = ConfusionMatrix([[3, 1], [2, 4]], (P, L))
        record = binary_metrics(cm)
        self.assertAlmostEqual(record.accuracy, 0.7)
        self.assertAlmostEqual(record.specificity, 4 / 6)
        self.assertAlmostEqual(record.precision, 3 / 5)
        self.assertAlmostEqual(record.recall, 3 / 4)
        assert_f1_identity(self, record)

    def test_published_f1_from_precision_and_recall(self):
        record = MetricsRecord.build(accuracy=0.6048, specificity=0.998, precision=0.9944, recall=0.2895)
        self.assertAlmostEqual(record.f1, 0.4485, delta=0.001)

    def test_undefined_precision_is_zero_with_notice(self):
        notices = NoticeLog()
        cm = ConfusionMatrix([[0, 2], [0, 3]], (P, L))
        record = binary_metrics(cm, notices=notices)
        self.assertEqual(record.precision, 0.0)
        self.assertEqual(record.f1, 0.0)
        self.assertEqual(notices.codes(), ["undefined_metric"])
        self.assertEqual(notices.notices[0].context["metric"], "precision")

    def test_class_order_does_not_matter(self):
        actual = [P, P, L, L, L, P, L]
        predicted = [P, L, L, P, L, P, L]
        forward = binary_metrics(confusion(actual, predicted, (P, L)))
        backward = binary_metrics(confusion(actual, predicted, (L, P)))
        self.assertEqual(forward, backward)

    def test_needs_two_classes(self):
        with self.assertRaises(MetricsError):
            binary_metrics(ConfusionMatrix(np.eye(3, dtype=int), (P, S, L)))


class MulticlassMetricsTest(SimpleTestCase):
    def setUp(self):
        self.cm = ConfusionMatrix([[5, 1, 2], [0, 3, 1], [1, 2, 6]], (P, S, L))

    def test_macro_against_per_class_arithmetic(self):
        counts = self.cm.counts
        precisions, recalls, specificities = [], [], []
        for i in range(3):
            tp = counts[i, i]
            fp = counts[:, i].sum() - tp
            fn = counts[i, :].sum() - tp
            tn = counts.sum() - tp - fp - fn
            precisions.append(tp / (tp + fp))
            recalls.append(tp / (tp + fn))
            specificities.append(tn / (tn + fp))
        record = multiclass_metrics(self.cm, Averaging.MACRO)
        self.assertAlmostEqual(record.accuracy, 14 / 21, delta=1e-12)
        self.assertAlmostEqual(record.precision, np.mean(precisions), delta=1e-12)
        self.assertAlmostEqual(record.recall, np.mean(recalls), delta=1e-12)
        self.assertAlmostEqual(record.specificity, np.mean(specificities), delta=1e-12)
        assert_f1_identity(self, record)

    def test_micro_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            cm = ConfusionMatrix(rng.integers(0, 20, (3, 3)) + np.eye(3, dtype=int), (P, S, L))
            record = multiclass_metrics(cm, Averaging.MICRO)
            self.assertAlmostEqual(record.precision, record.accuracy, delta=1e-12)
            self.assertAlmostEqual(record.recall, record.accuracy, delta=1e-12)
            self.assertAlmostEqual(record.f1, record.accuracy, delta=1e-12)

    def test_symmetric_errors(self):
        cm = ConfusionMatrix([[8, 1, 1], [1, 8, 1], [1, 1, 8]], (P, S, L))
        record = multiclass_metrics(cm)
        for entry in class_metrics(cm):
            self.assertAlmostEqual(record.precision, entry.record.precision, delta=1e-12)

    def test_absent_class_is_zero_with_notice(self):
        notices = NoticeLog()
        cm = ConfusionMatrix([[4, 0, 1], [0, 0, 0], [1, 0, 4]], (P, S, L))
        record = multiclass_metrics(cm, notices=notices)
        self.assertTrue(0.0 <= record.precision <= 1.0)
        self.assertIn("undefined_metric", notices.codes())

    def test_metrics_within_unit_interval(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            cm = ConfusionMatrix(rng.integers(0, 9, (3, 3)) + 1, (P, S, L))
            for averaging in Averaging:
                for value in multiclass_metrics(cm, averaging).as_dict().values():
                    self.assertTrue(0.0 <= value <= 1.0)

    def test_class_metrics_support(self):
        self.assertEqual([entry.support for entry in class_metrics(self.cm)], [8, 4, 9])

    def test_score_dispatch(self):
        binary = ConfusionMatrix([[3, 1], [2, 4]], (P, L))
        self.assertEqual(score(binary), binary_metrics(binary))
        self.assertEqual(score(self.cm, averaging=Averaging.MICRO), multiclass_metrics(self.cm, "micro"))
        noPhishing = ConfusionMatrix([[3, 1], [2, 4]], (S, L))
        self.assertEqual(score(noPhishing), multiclass_metrics(noPhishing))


class AggregationTest(SimpleTestCase):
    def test_mean_and_std(self):
        records = [
            MetricsRecord.build(0.9, 0.8, 0.7, 0.6),
            MetricsRecord.build(0.7, 0.6, 0.5, 0.4),
        ]
        summary = mean_and_std(records)
        self.assertAlmostEqual(summary["accuracy"]["mean"], 0.8)
        self.assertAlmostEqual(summary["accuracy"]["std"], np.sqrt(0.02))
        self.assertEqual(set(summary), set(MetricsRecord.names()))

    def test_single_record_has_zero_spread(self):
        summary = mean_and_std([MetricsRecord.build(1, 1, 1, 1)])
        self.assertEqual(summary["f1"], {"mean": 1.0, "std": 0.0})

    def test_percentages(self):
        record = MetricsRecord.build(0.9573, 0.9548, 0.9561, 0.9598)
        self.assertEqual(record.as_percentages()["accuracy"], "95.73%")
        self.assertEqual(record.as_percentages()["specificity"], "95.48%")


class PublishedF1Test(SimpleTestCase):
    def test_all_but_two_rows_are_consistent(self):
        checks = check_published_f1()
        self.assertEqual(len(checks), 36)
        misprints = {
            (check.row.dataset, check.row.reduced, check.row.algorithm)
            for check in checks
            if not check.consistent
        }
        self.assertEqual(misprints, {("d1", True, "dtree"), ("d1", True, "knn")})

    def test_filters(self):
        self.assertEqual(len(check_published_f1(dataset="d3")), 12)
        self.assertTrue(all(check.consistent for check in check_published_f1(dataset="d2")))
