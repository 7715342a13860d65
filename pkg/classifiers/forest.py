import math
from dataclasses import dataclass

import numpy as np

from classifiers.tree import apply_tree, grow_tree
from core.utils.utils import deriveSeeds


@dataclass(frozen=True, eq=False)
class ForestState:
    trees: tuple


def features_per_split(n_features):
    return max(1, math.ceil(math.sqrt(n_features)))


def grow_forest(x, y, n_classes, params):
    n = y.size
    maxFeatures = features_per_split(x.shape[1]) if params.feature_subsampling else None
    trees = []
    for treeSeed in deriveSeeds(params.seed, params.trees):
        rng = np.random.default_rng(treeSeed)
        rows = rng.integers(0, n, size=n) if params.bootstrap else np.arange(n)
        trees.append(
            grow_tree(
                x[rows],
                y[rows],
                n_classes,
                max_depth=params.max_depth,
                min_samples_split=params.min_samples_split,
                max_features=maxFeatures,
                rng=rng,
            )
        )
    return ForestState(trees=tuple(trees))


def forest_votes(forest, x, n_classes):
    votes = np.zeros((x.shape[0], n_classes))
    rows = np.arange(x.shape[0])
    for tree in forest.trees:
        winners = np.argmax(tree.value[apply_tree(tree, x)], axis=1)
        votes[rows, winners] += 1.0
    return votes


def forest_scores(forest, x, n_classes):
    """Vote shares; argmax resolves ties to the earliest class."""
    return forest_votes(forest, x, n_classes) / len(forest.trees)
