import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from classifiers.forest import ForestState
from classifiers.models import Algorithm, ConstantState, ForestParams, TrainedClassifier
from classifiers.serializers import build_params
from classifiers.services import (
    decision_function,
    fit,
    fit_random_forest,
    fit_svm_smo,
    load_model,
    predict,
    save_model,
)
from classifiers.tree import LEAF, TreeState
from core.exceptions import ClassifierError, InvalidHyperparams
from core.utils.notices import NoticeLog
from websites.models import ClassLabel
from websites.tests.factories import DescriptorFactory, SyntheticMatrixFactory, build_matrix

P = int(ClassLabel.PHISHING)
L = int(ClassLabel.LEGITIMATE)
S = int(ClassLabel.SUSPICIOUS)

QUICK_PARAMS = {
    Algorithm.RF: {"trees": 7},
    Algorithm.ANN: {"epochs": 5, "hidden": 8},
}


def quick_params(algorithm, seed=0, **overrides):
    return build_params(algorithm, {**QUICK_PARAMS.get(algorithm, {}), **overrides}, seed=seed)


def accuracy(model, matrix):
    return float(np.mean(predict(model, matrix).labels == matrix.labels))


class FitContractTest(SimpleTestCase):
    def setUp(self):
        self.train = SyntheticMatrixFactory(n_rows=80, seed=5)
        self.test = SyntheticMatrixFactory(
            n_rows=30, seed=6, descriptor=self.train.descriptor
        )

    def test_every_algorithm_predicts_known_labels(self):
        for algorithm in Algorithm:
            model = fit(algorithm, self.train, quick_params(algorithm))
            labels = predict(model, self.test).labels
            self.assertEqual(labels.size, 30)
            self.assertTrue(set(labels.tolist()) <= {P, L}, algorithm)

    def test_default_params(self):
        model = fit(Algorithm.KNN, self.train)
        self.assertEqual(model.params.k, 5)

    def test_probability_rows_sum_to_one(self):
        for algorithm in (Algorithm.NB, Algorithm.ANN, Algorithm.RF, Algorithm.KNN, Algorithm.DTREE):
            prediction = predict(fit(algorithm, self.train, quick_params(algorithm)), self.test)
            self.assertTrue(prediction.probabilistic)
            self.assertTrue(np.isfinite(prediction.scores).all())
            np.testing.assert_allclose(prediction.scores.sum(axis=1), 1.0, atol=1e-8)

    def test_svm_scores_are_margins(self):
        prediction = predict(fit(Algorithm.SVM, self.train), self.test)
        self.assertFalse(prediction.probabilistic)
        np.testing.assert_array_equal(prediction.scores[:, 0], -prediction.scores[:, 1])

    def test_deterministic_for_fixed_seed(self):
        for algorithm in Algorithm:
            first = predict(fit(algorithm, self.train, quick_params(algorithm, seed=3)), self.test)
            second = predict(fit(algorithm, self.train, quick_params(algorithm, seed=3)), self.test)
            np.testing.assert_array_equal(first.labels, second.labels)
            np.testing.assert_array_equal(first.scores, second.scores)

    def test_predict_does_not_mutate_model(self):
        model = fit(Algorithm.KNN, self.train)
        before = model.state.values.copy()
        predict(model, self.test)
        np.testing.assert_array_equal(model.state.values, before)

    def test_dimension_mismatch(self):
        model = fit(Algorithm.NB, self.train)
        narrow = build_matrix(np.zeros((2, 3)), [P, L])
        with self.assertRaises(ClassifierError):
            predict(model, narrow)

    def test_empty_training_set(self):
        empty = build_matrix(np.zeros((0, 2)), [])
        with self.assertRaises(ClassifierError):
            fit(Algorithm.DTREE, empty)

    def test_wrong_params_type(self):
        with self.assertRaises(InvalidHyperparams):
            fit(Algorithm.SVM, self.train, build_params(Algorithm.KNN))

    def test_out_of_range_params(self):
        with self.assertRaises(InvalidHyperparams):
            fit(Algorithm.KNN, self.train, build_params(Algorithm.KNN).__class__(k=0))

    def test_single_class_is_constant_predictor(self):
        oneClass = build_matrix(np.random.default_rng(0).standard_normal((10, 2)), [L] * 10)
        notices = NoticeLog()
        model = fit(Algorithm.SVM, oneClass, notices=notices)
        self.assertTrue(model.is_constant)
        self.assertEqual(notices.codes(), ["single_class_training"])
        mixed = build_matrix(np.zeros((3, 2)), [P, L, P], oneClass.descriptor)
        self.assertEqual(predict(model, mixed).labels.tolist(), [L, L, L])


class DecisionTreeTest(SimpleTestCase):
    def test_separable_one_dimensional(self):
        x = np.concatenate([np.linspace(-2, -0.1, 10), np.linspace(0.1, 2, 10)])
        matrix = build_matrix(x, [P] * 10 + [L] * 10)
        self.assertEqual(accuracy(fit(Algorithm.DTREE, matrix), matrix), 1.0)

    def test_distinct_rows_fit_perfectly(self):
        matrix = SyntheticMatrixFactory(n_rows=120, seed=9, separation=0.2)
        model = fit(Algorithm.DTREE, matrix)
        self.assertEqual(accuracy(model, matrix), 1.0)

    def test_leaves_pure_or_small(self):
        matrix = SyntheticMatrixFactory(n_rows=120, seed=9, separation=0.2)
        params = build_params(Algorithm.DTREE, {"min_samples_split": 10})
        tree = fit(Algorithm.DTREE, matrix, params).state
        for node in np.flatnonzero(tree.feature == LEAF):
            counts = tree.value[node]
            self.assertTrue(np.count_nonzero(counts) == 1 or counts.sum() < 10)

    def test_max_depth(self):
        matrix = SyntheticMatrixFactory(n_rows=120, seed=9, separation=0.2)
        tree = fit(Algorithm.DTREE, matrix, build_params(Algorithm.DTREE, {"max_depth": 2})).state
        self.assertLessEqual(tree.depth(), 2)

    def test_tie_prefers_lowest_feature(self):
        # both columns separate the classes equally well
        matrix = build_matrix([[0, 0], [1, 1], [2, 2], [3, 3]], [P, P, L, L])
        tree = fit(Algorithm.DTREE, matrix).state
        self.assertEqual(tree.feature[0], 0)
        self.assertEqual(tree.threshold[0], 1.5)

    def test_identical_rows_with_different_labels_stay_a_leaf(self):
        matrix = build_matrix([[1.0], [1.0]], [P, L])
        tree = fit(Algorithm.DTREE, matrix).state
        self.assertEqual(tree.node_count, 1)


class RandomForestTest(SimpleTestCase):
    def setUp(self):
        self.train = SyntheticMatrixFactory(n_rows=90, seed=12, separation=0.3)
        self.test = SyntheticMatrixFactory(
            n_rows=40, seed=13, separation=0.3, descriptor=self.train.descriptor
        )

    def test_single_unbagged_tree_equals_decision_tree(self):
        params = build_params(
            Algorithm.RF, {"trees": 1, "bootstrap": False, "feature_subsampling": False}
        )
        forest = fit_random_forest(self.train, params)
        tree = fit(Algorithm.DTREE, self.train)
        np.testing.assert_array_equal(
            predict(forest, self.test).labels, predict(tree, self.test).labels
        )
        np.testing.assert_array_equal(forest.state.trees[0].threshold, tree.state.threshold)

    def test_tree_count(self):
        model = fit_random_forest(self.train, quick_params(Algorithm.RF))
        self.assertEqual(len(model.state.trees), 7)

    def test_vote_tie_goes_to_earliest_class(self):
        def leaf(counts):
            return TreeState(
                feature=np.array([LEAF]),
                threshold=np.array([0.0]),
                left=np.array([LEAF]),
                right=np.array([LEAF]),
                value=np.array([counts]),
            )

        model = TrainedClassifier(
            algorithm=Algorithm.RF,
            params=ForestParams(trees=2),
            class_list=(ClassLabel.PHISHING, ClassLabel.LEGITIMATE),
            n_features=2,
            state=ForestState(trees=(leaf([0, 3]), leaf([5, 0]))),
        )
        prediction = predict(model, build_matrix(np.zeros((3, 2)), [L, L, L]))
        self.assertEqual(prediction.labels.tolist(), [P, P, P])


class NaiveBayesTest(SimpleTestCase):
    def test_categorical_posteriors_match_hand_computation(self):
        descriptor = DescriptorFactory(width=2)
        rows = [[-1, 0], [-1, 1], [0, 1], [1, 1], [1, -1], [0, 0]]
        labels = [P, P, P, L, L, L]
        train = build_matrix(rows, labels, descriptor)
        params = build_params(Algorithm.NB, {"variant": "categorical"})
        model = fit(Algorithm.NB, train, params)

        queries = [[-1, 1], [1, 0], [0, -1], [2, 1]]
        levels = [{-1, 0, 1}, {-1, 0, 1}]
        expected = []
        for query in queries:
            joint = []
            for c in (P, L):
                members = [row for row, label in zip(rows, labels) if label == c]
                value = Fraction(len(members), len(rows))
                for j, level in enumerate(query):
                    matches = sum(1 for row in members if row[j] == level)
                    value *= Fraction(matches + 1, len(members) + len(levels[j]))
                joint.append(value)
            expected.append([float(v / sum(joint)) for v in joint])

        scores = predict(model, build_matrix(queries, [P] * 4, descriptor)).scores
        np.testing.assert_allclose(scores, expected, atol=1e-10, rtol=0)

    def test_gaussian_constant_feature_stays_finite(self):
        train = build_matrix([[1.0, 0.0], [1.0, 1.0], [1.0, 5.0], [1.0, 6.0]], [P, P, L, L])
        prediction = predict(fit(Algorithm.NB, train), train)
        self.assertTrue(np.isfinite(prediction.scores).all())
        self.assertEqual(prediction.labels.tolist(), [P, P, L, L])

    def test_gaussian_matches_closed_form(self):
        train = build_matrix([[0.0], [2.0], [10.0], [14.0]], [P, P, L, L])
        scores = predict(fit(Algorithm.NB, train), build_matrix([[4.0]], [P])).scores[0]

        def density(x, mean, variance):
            return np.exp(-((x - mean) ** 2) / (2 * variance)) / np.sqrt(2 * np.pi * variance)

        phishing = density(4.0, 1.0, 1.0)
        legitimate = density(4.0, 12.0, 4.0)
        self.assertAlmostEqual(scores[0], phishing / (phishing + legitimate), delta=1e-10)


class NearestNeighborsTest(SimpleTestCase):
    def test_stores_training_set_verbatim(self):
        train = SyntheticMatrixFactory(n_rows=30)
        model = fit(Algorithm.KNN, train)
        np.testing.assert_array_equal(model.state.values, train.values)

    def test_k1_recovers_training_labels(self):
        train = SyntheticMatrixFactory(n_rows=50, separation=0.1)
        model = fit(Algorithm.KNN, train, build_params(Algorithm.KNN, {"k": 1}))
        self.assertEqual(accuracy(model, train), 1.0)

    def test_k_equal_n_predicts_majority(self):
        train = build_matrix([[0.0], [1.0], [2.0], [3.0], [10.0], [11.0], [12.0]], [P, P, P, P, L, L, L])
        for k in (7, 50):
            model = fit(Algorithm.KNN, train, build_params(Algorithm.KNN, {"k": k}))
            queries = build_matrix([[-5.0], [11.0], [100.0]], [L, L, L], train.descriptor)
            self.assertEqual(predict(model, queries).labels.tolist(), [P, P, P])

    def test_vote_tie_goes_to_earliest_class(self):
        train = build_matrix([[-1.0], [1.0]], [L, P])
        model = fit(Algorithm.KNN, train, build_params(Algorithm.KNN, {"k": 2}))
        self.assertEqual(predict(model, build_matrix([[0.0]], [L])).labels.tolist(), [P])


class SupportVectorMachineTest(SimpleTestCase):
    def test_xor_with_rbf_kernel(self):
        train = build_matrix([[0, 0], [1, 1], [0, 1], [1, 0]], [P, P, L, L])
        params = build_params(Algorithm.SVM, {"gamma": 1.0, "C": 10.0})
        model = fit_svm_smo(train, params)
        self.assertEqual(accuracy(model, train), 1.0)

    def test_separable_blobs_with_linear_kernel(self):
        rng = np.random.default_rng(4)
        x = np.vstack([rng.normal(-3, 0.5, (20, 2)), rng.normal(3, 0.5, (20, 2))])
        train = build_matrix(x, [P] * 20 + [L] * 20)
        params = build_params(Algorithm.SVM, {"kernel": "linear"})
        model = fit_svm_smo(train, params)
        self.assertEqual(accuracy(model, train), 1.0)
        for machine in model.state.machines:
            self.assertTrue((np.abs(machine.coefficients) <= params.C + 1e-12).all())

    def test_contradictory_duplicates(self):
        train = build_matrix([[1.0, 1.0], [1.0, 1.0]], [P, L])
        model = fit_svm_smo(train)
        self.assertLessEqual(accuracy(model, train), 0.5)

    def test_decision_sign_flips_with_labels(self):
        train = SyntheticMatrixFactory(n_rows=40, seed=8, separation=0.4)
        flipped = build_matrix(train.values, -train.labels, train.descriptor)
        queries = SyntheticMatrixFactory(n_rows=10, seed=9, descriptor=train.descriptor)
        original = decision_function(fit_svm_smo(train), queries)
        mirrored = decision_function(fit_svm_smo(flipped), queries)
        np.testing.assert_array_equal(original, -mirrored)

    def test_one_vs_rest_for_three_classes(self):
        train = SyntheticMatrixFactory(
            n_rows=60, descriptor=DescriptorFactory(width=3, multiclass=True), separation=1.0
        )
        model = fit(Algorithm.SVM, train)
        self.assertEqual(len(model.state.machines), 3)
        self.assertEqual(decision_function(model, train).shape, (60, 3))

    def test_iteration_cap_flags_non_convergence(self):
        train = SyntheticMatrixFactory(n_rows=60, seed=2, separation=0.1)
        notices = NoticeLog()
        model = fit(
            Algorithm.SVM, train, build_params(Algorithm.SVM, {"max_iter": 3}), notices
        )
        self.assertIn("not_converged", model.flags)
        self.assertEqual(notices.codes(), ["svm_not_converged"])

    def test_every_kernel_trains(self):
        train = SyntheticMatrixFactory(n_rows=40, seed=1, separation=1.0)
        for kernel in ("linear", "rbf", "poly", "sigmoid"):
            model = fit_svm_smo(train, build_params(Algorithm.SVM, {"kernel": kernel}))
            self.assertEqual(predict(model, train).labels.size, 40)

    def test_decision_function_only_for_svm(self):
        train = SyntheticMatrixFactory(n_rows=20)
        with self.assertRaises(ClassifierError):
            decision_function(fit(Algorithm.NB, train), train)


class NeuralNetworkTest(SimpleTestCase):
    def test_validation_selects_best_epoch(self):
        train = SyntheticMatrixFactory(n_rows=60, seed=3)
        validation = SyntheticMatrixFactory(n_rows=20, seed=4, descriptor=train.descriptor)
        params = build_params(Algorithm.ANN, {"epochs": 6, "hidden": 8})
        model = fit(Algorithm.ANN, train, params, validation=validation)
        self.assertGreaterEqual(model.state.best_epoch, 1)
        self.assertLessEqual(model.state.best_epoch, 6)
        self.assertEqual(model.state.epochs_run, 6)

    def test_learns_separable_data(self):
        train = SyntheticMatrixFactory(
            n_rows=100, seed=3, separation=1.0, descriptor=DescriptorFactory(width=8)
        )
        params = build_params(Algorithm.ANN, {"epochs": 40, "learning_rate": 0.01})
        model = fit(Algorithm.ANN, train, params)
        self.assertGreater(accuracy(model, train), 0.9)


class PersistenceTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.train = SyntheticMatrixFactory(
            n_rows=60, seed=2, descriptor=DescriptorFactory(width=3, multiclass=True)
        )
        self.test = SyntheticMatrixFactory(n_rows=25, seed=3, descriptor=self.train.descriptor)

    def assertRoundTrip(self, model):
        path = save_model(model, Path(self.tmp.name) / ("%s.json" % model.algorithm))
        loaded = load_model(path)
        before = predict(model, self.test)
        after = predict(loaded, self.test)
        np.testing.assert_array_equal(before.labels, after.labels)
        np.testing.assert_array_equal(before.scores, after.scores)
        self.assertEqual(loaded.params, model.params)
        self.assertEqual(loaded.class_list, model.class_list)

    def test_round_trip_every_algorithm(self):
        for algorithm in Algorithm:
            self.assertRoundTrip(fit(algorithm, self.train, quick_params(algorithm, seed=4)))

    def test_round_trip_categorical_bayes(self):
        descriptor = DescriptorFactory(width=4)
        train = build_matrix(
            np.random.default_rng(1).integers(-1, 2, (30, 4)), [P, L] * 15, descriptor
        )
        model = fit(Algorithm.NB, train, build_params(Algorithm.NB, {"variant": "categorical"}))
        self.test = build_matrix(
            np.random.default_rng(2).integers(-1, 2, (10, 4)), [P, L] * 5, descriptor
        )
        self.assertRoundTrip(model)

    def test_round_trip_constant_predictor(self):
        model = TrainedClassifier(
            algorithm=Algorithm.DTREE,
            params=build_params(Algorithm.DTREE),
            class_list=(ClassLabel.SUSPICIOUS,),
            n_features=3,
            state=ConstantState(class_index=0),
            flags=("constant",),
        )
        self.assertRoundTrip(model)

    def test_malformed_file(self):
        path = Path(self.tmp.name) / "broken.json"
        path.write_text("{not json")
        with self.assertRaises(ClassifierError):
            load_model(path)

    def test_unsupported_format_version(self):
        path = Path(self.tmp.name) / "future.json"
        path.write_text('{"format_version": 99, "algorithm": "nb"}')
        with self.assertRaisesMessage(ClassifierError, "format_version"):
            load_model(path)
