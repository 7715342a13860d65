"""CART decision trees with Gini impurity.

Trees are stored as flat node arrays; leaves have ``feature == -1`` and
carry the class counts of the rows that reached them.
"""
from dataclasses import dataclass

import numpy as np

LEAF = -1
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class TreeState:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def node_count(self):
        return self.feature.size

    def depth(self):
        depths = np.zeros(self.node_count, dtype=np.int64)
        for node in range(self.node_count):
            if self.feature[node] != LEAF:
                depths[self.left[node]] = depths[node] + 1
                depths[self.right[node]] = depths[node] + 1
        return int(depths.max())


def gini(counts):
    total = counts.sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        shares = counts / total[..., None]
    return 1.0 - np.sum(shares * shares, axis=-1)


def best_split(x, y, n_classes, features):
    """Lowest weighted Gini split over ``features``.

    Candidate thresholds are midpoints between consecutive distinct values.
    Ties keep the lowest feature index, then the lowest threshold.
    Returns ``(feature, threshold)`` or ``None`` when no feature varies.
    """
    n = y.size
    onehot = np.eye(n_classes)[y]
    total = onehot.sum(axis=0)
    leftSizes = np.arange(1, n)
    rightSizes = n - leftSizes
    best = None
    bestImpurity = np.inf
    for f in features:
        order = np.argsort(x[:, f], kind="stable")
        column = x[order, f]
        distinct = column[1:] > column[:-1]
        if not distinct.any():
            continue
        leftCounts = np.cumsum(onehot[order], axis=0)[:-1]
        rightCounts = total - leftCounts
        impurity = (
            leftSizes * gini(leftCounts) + rightSizes * gini(rightCounts)
        ) / n
        impurity[~distinct] = np.inf
        position = int(np.argmin(impurity))
        if impurity[position] < bestImpurity - TIE_TOLERANCE:
            bestImpurity = impurity[position]
            best = (int(f), 0.5 * (column[position] + column[position + 1]))
    return best


def grow_tree(x, y, n_classes, max_depth=None, min_samples_split=2, max_features=None, rng=None):
    """Grow a tree on rows ``x`` with class indices ``y``.

    With ``max_features`` set, each split searches a sorted random subset of
    that many features drawn from ``rng`` and falls back to the remaining
    features when the subset cannot split the node.
    """
    n_features = x.shape[1]
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(rows):
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(np.bincount(y[rows], minlength=n_classes))
        return len(feature) - 1

    stack = [(new_node(np.arange(y.size)), np.arange(y.size), 0)]
    while stack:
        node, rows, depth = stack.pop()
        counts = value[node]
        if np.count_nonzero(counts) <= 1 or rows.size < min_samples_split:
            continue
        if max_depth is not None and depth >= max_depth:
            continue
        xs = x[rows]
        ys = y[rows]
        if max_features is not None and max_features < n_features:
            chosen = np.sort(rng.choice(n_features, size=max_features, replace=False))
            split = best_split(xs, ys, n_classes, chosen)
            if split is None:
                rest = np.setdiff1d(np.arange(n_features), chosen)
                split = best_split(xs, ys, n_classes, rest)
        else:
            split = best_split(xs, ys, n_classes, range(n_features))
        if split is None:
            continue
        f, t = split
        goesLeft = xs[:, f] <= t
        if goesLeft.all() or not goesLeft.any():
            continue
        feature[node] = f
        threshold[node] = t
        leftRows = rows[goesLeft]
        rightRows = rows[~goesLeft]
        left[node] = new_node(leftRows)
        right[node] = new_node(rightRows)
        stack.append((right[node], rightRows, depth + 1))
        stack.append((left[node], leftRows, depth + 1))

    return TreeState(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        value=np.array(value, dtype=np.int64).reshape(-1, n_classes),
    )


def apply_tree(tree, x):
    """Leaf index reached by every row."""
    nodes = np.zeros(x.shape[0], dtype=np.int64)
    active = tree.feature[nodes] != LEAF
    while active.any():
        current = nodes[active]
        features = tree.feature[current]
        goesLeft = x[np.flatnonzero(active), features] <= tree.threshold[current]
        nodes[active] = np.where(goesLeft, tree.left[current], tree.right[current])
        active = tree.feature[nodes] != LEAF
    return nodes


def tree_scores(tree, x):
    counts = tree.value[apply_tree(tree, x)].astype(np.float64)
    return counts / counts.sum(axis=1, keepdims=True)
