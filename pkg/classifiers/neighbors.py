from dataclasses import dataclass

import numpy as np

CHUNK_ROWS = 256


@dataclass(frozen=True, eq=False)
class NeighborsState:
    """The raw training rows and their class indices, kept verbatim."""

    values: np.ndarray
    targets: np.ndarray
    k: int


def squared_distances(queries, reference):
    queryNorms = np.sum(queries * queries, axis=1)[:, None]
    referenceNorms = np.sum(reference * reference, axis=1)[None, :]
    distances = queryNorms + referenceNorms - 2.0 * queries @ reference.T
    return np.maximum(distances, 0.0)


def nearest_neighbors(queries, reference, k):
    """Indices of the k nearest reference rows; equal distances keep row order."""
    k = min(k, reference.shape[0])
    found = np.empty((queries.shape[0], k), dtype=np.int64)
    for start in range(0, queries.shape[0], CHUNK_ROWS):
        distances = squared_distances(queries[start : start + CHUNK_ROWS], reference)
        found[start : start + CHUNK_ROWS] = np.argsort(distances, axis=1, kind="stable")[:, :k]
    return found


def neighbor_scores(state, queries, reference, n_classes):
    """Vote shares among the neighbours; ``reference`` is the standardized training set."""
    neighbors = nearest_neighbors(queries, reference, state.k)
    votes = np.zeros((queries.shape[0], n_classes))
    rows = np.repeat(np.arange(queries.shape[0]), neighbors.shape[1])
    np.add.at(votes, (rows, state.targets[neighbors].ravel()), 1.0)
    return votes / neighbors.shape[1]
