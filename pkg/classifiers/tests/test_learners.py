import numpy as np
from django.test import SimpleTestCase

from classifiers.forest import features_per_split
from classifiers.models import Standardizer
from classifiers.network import AdamOptimizer, initial_parameters, loss_and_gradients
from classifiers.neighbors import nearest_neighbors
from classifiers.svm import KernelSpec, default_gamma
from classifiers.tree import best_split, gini
from websites.tests.factories import SyntheticMatrixFactory


class NetworkGradientTest(SimpleTestCase):
    def test_backpropagation_matches_finite_differences(self):
        matrix = SyntheticMatrixFactory(n_rows=20, seed=11)
        x = Standardizer.fit(matrix.values).apply(matrix.values)
        targets = (matrix.labels > 0).astype(np.int64)
        onehot = np.eye(2)[targets]
        rng = np.random.default_rng(0)
        parameters = initial_parameters(rng, x.shape[1], 16, 2)
        parameters["b1"] = rng.normal(0.0, 0.1, 16)
        parameters["b2"] = rng.normal(0.0, 0.1, 2)

        _, gradients = loss_and_gradients(parameters, x, onehot)
        step = 1e-5
        for name, values in parameters.items():
            for index in np.ndindex(values.shape):
                original = values[index]
                values[index] = original + step
                plus, _ = loss_and_gradients(parameters, x, onehot)
                values[index] = original - step
                minus, _ = loss_and_gradients(parameters, x, onehot)
                values[index] = original
                numeric = (plus - minus) / (2 * step)
                analytic = gradients[name][index]
                error = abs(analytic - numeric) / max(abs(analytic) + abs(numeric), 1e-6)
                self.assertLess(error, 1e-4, (name, index))

    def test_adam_moves_against_gradient(self):
        parameters = {
            "w1": np.ones((1, 1)),
            "b1": np.zeros(1),
            "w2": np.ones((1, 1)),
            "b2": np.zeros(1),
        }
        gradients = {
            "w1": np.array([[2.0]]),
            "b1": np.array([-3.0]),
            "w2": np.zeros((1, 1)),
            "b2": np.zeros(1),
        }
        optimizer = AdamOptimizer(parameters, 0.1, 0.9, 0.999, 1e-8)
        optimizer.update(parameters, gradients)
        # the first bias-corrected step has magnitude learning_rate
        self.assertAlmostEqual(parameters["w1"][0, 0], 0.9, places=6)
        self.assertAlmostEqual(parameters["b1"][0], 0.1, places=6)
        self.assertEqual(parameters["w2"][0, 0], 1.0)


class TreeSplitTest(SimpleTestCase):
    def test_gini(self):
        np.testing.assert_allclose(gini(np.array([[5, 5], [10, 0], [0, 0]])), [0.5, 0.0, np.nan])

    def test_best_split_threshold_is_midpoint(self):
        x = np.array([[1.0], [2.0], [4.0], [8.0]])
        self.assertEqual(best_split(x, np.array([0, 0, 1, 1]), 2, [0]), (0, 3.0))

    def test_constant_features_cannot_split(self):
        x = np.ones((4, 2))
        self.assertIsNone(best_split(x, np.array([0, 1, 0, 1]), 2, [0, 1]))

    def test_features_per_split(self):
        self.assertEqual(features_per_split(30), 6)
        self.assertEqual(features_per_split(9), 3)
        self.assertEqual(features_per_split(1), 1)


class KernelTest(SimpleTestCase):
    def test_rbf_diagonal_is_one(self):
        x = np.random.default_rng(1).standard_normal((5, 3))
        kernel = KernelSpec(kind="rbf", gamma=0.5)
        np.testing.assert_allclose(np.diag(kernel(x, x)), 1.0)

    def test_polynomial(self):
        kernel = KernelSpec(kind="poly", gamma=1.0, degree=2, coef0=1.0)
        self.assertEqual(kernel(np.array([[1.0, 2.0]]), np.array([[3.0, 1.0]]))[0, 0], 36.0)

    def test_default_gamma(self):
        x = np.array([[1.0, -1.0], [-1.0, 1.0]])
        self.assertEqual(default_gamma(x), 0.5)
        self.assertEqual(default_gamma(np.zeros((3, 2))), 1.0)


class NeighborSearchTest(SimpleTestCase):
    def test_equal_distances_keep_row_order(self):
        reference = np.array([[1.0], [-1.0], [0.0], [1.0]])
        found = nearest_neighbors(np.array([[0.0]]), reference, 3)
        self.assertEqual(found.tolist(), [[2, 0, 1]])

    def test_k_is_capped(self):
        found = nearest_neighbors(np.zeros((2, 1)), np.ones((3, 1)), 10)
        self.assertEqual(found.shape, (2, 3))


class StandardizerTest(SimpleTestCase):
    def test_constant_column_keeps_unit_scale(self):
        standardizer = Standardizer.fit(np.array([[1.0, 2.0], [1.0, 4.0]]))
        np.testing.assert_array_equal(standardizer.scale, [1.0, 1.0])
        np.testing.assert_array_equal(
            standardizer.apply(np.array([[1.0, 3.0]])), [[0.0, 0.0]]
        )
