import logging
from pathlib import Path

import numpy as np
import pandas as pd

from core.exceptions import ReductionError
from core.utils.notices import NoticeLog
from reduction.models import FeatureRanking, PcaModel, RankedFeature
from websites.models import FeatureMatrix, ValueDomain

logger = logging.getLogger(__name__)

JACOBI_TOLERANCE = 1e-12
JACOBI_MAX_SWEEPS = 100
NEGATIVE_EIGENVALUE_LIMIT = -1e-10


def _off_diagonal_norm(a):
    return np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))


def jacobi_eigh(matrix, tolerance=JACOBI_TOLERANCE, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigenpairs of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvectors as columns, in
    the order the diagonal settles (unsorted).
    """
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ReductionError("eigendecomposition needs a square matrix")
    n = a.shape[0]
    v = np.eye(n)
    limit = tolerance * max(1.0, np.linalg.norm(a))
    for sweep in range(max_sweeps):
        if _off_diagonal_norm(a) < limit:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 if theta == 0.0 else np.sign(theta) / (
                    abs(theta) + np.sqrt(theta * theta + 1.0)
                )
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                colP = a[:, p].copy()
                colQ = a[:, q].copy()
                a[:, p] = c * colP - s * colQ
                a[:, q] = s * colP + c * colQ
                rowP = a[p, :].copy()
                rowQ = a[q, :].copy()
                a[p, :] = c * rowP - s * rowQ
                a[q, :] = s * rowP + c * rowQ
                a[p, q] = a[q, p] = 0.0

                vecP = v[:, p].copy()
                vecQ = v[:, q].copy()
                v[:, p] = c * vecP - s * vecQ
                v[:, q] = s * vecP + c * vecQ
    else:
        if _off_diagonal_norm(a) >= limit:
            logger.warning(
                "Jacobi iteration stopped after %d sweeps above tolerance", max_sweeps
            )
    return np.diag(a).copy(), v


def covariance(z):
    n = z.shape[0]
    centered = z - z.mean(axis=0)
    return centered.T @ centered / (n - 1)


def fit_pca(m, standardize=True, notices=None):
    notices = notices if notices is not None else NoticeLog()
    if m.n_rows < 2:
        raise ReductionError("PCA needs at least 2 rows, got %d" % m.n_rows)
    values = m.values
    columnMeans = values.mean(axis=0)
    deviations = values.std(axis=0, ddof=1)

    if standardize:
        degenerate = deviations <= 1e-12 * np.maximum(1.0, np.abs(columnMeans))
        for j in np.flatnonzero(degenerate):
            notices.record(
                "zero_variance_column",
                "dropped constant feature '%s' before standardizing"
                % m.descriptor.feature_names[j],
                feature=m.descriptor.feature_names[j],
            )
    else:
        degenerate = np.zeros(m.n_cols, dtype=bool)
    kept = np.flatnonzero(~degenerate)
    if kept.size == 0:
        raise ReductionError("all columns are degenerate")

    mean = columnMeans[kept]
    scale = deviations[kept] if standardize else np.ones(kept.size)
    z = (values[:, kept] - mean) / scale
    eigenvalues, vectors = jacobi_eigh(covariance(z))

    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    components = vectors[:, order].T.copy()
    if eigenvalues.min() < NEGATIVE_EIGENVALUE_LIMIT:
        notices.record(
            "negative_eigenvalue",
            "clamped eigenvalue %.3g to 0" % eigenvalues.min(),
        )
    eigenvalues = np.maximum(eigenvalues, 0.0)
    total = eigenvalues.sum()
    if total <= 0.0:
        raise ReductionError("all columns are degenerate")

    # largest-magnitude loading of every axis is positive
    pivots = np.argmax(np.abs(components), axis=1)
    signs = np.where(components[np.arange(components.shape[0]), pivots] < 0, -1.0, 1.0)
    components *= signs[:, None]

    model = PcaModel(
        mean=mean,
        scale=scale,
        components=components,
        eigenvalues=eigenvalues,
        explained_variance_ratio=eigenvalues / total,
        standardized=bool(standardize),
        kept_indices=kept,
        column_means=columnMeans,
        descriptor=m.descriptor,
        n_samples=m.n_rows,
    )
    logger.info(
        "fitted PCA on %s: %d rows, %d of %d features kept",
        m.descriptor.id,
        m.n_rows,
        kept.size,
        m.n_cols,
    )
    return model


def select_components(model, variance_threshold):
    if not 0.0 < variance_threshold <= 1.0:
        raise ReductionError(
            "variance threshold must lie in (0, 1], got %r" % variance_threshold
        )
    cumulative = model.cumulative_variance()
    k = int(np.searchsorted(cumulative, variance_threshold - 1e-12)) + 1
    return min(k, model.n_components)


def _check_k(model, k):
    if not 1 <= k <= model.n_components:
        raise ReductionError(
            "component count %d outside [1, %d]" % (k, model.n_components)
        )


def component_descriptor(model, k):
    return model.descriptor.derive(
        "%s-pca" % model.descriptor.id,
        ["PC%d" % (i + 1) for i in range(k)],
        [ValueDomain.CONTINUOUS] * k,
    )


def transform(model, m, k):
    if m.n_cols != model.n_features:
        raise ReductionError(
            "matrix has %d features, PCA model expects %d" % (m.n_cols, model.n_features)
        )
    _check_k(model, k)
    z = (m.values[:, model.kept_indices] - model.mean) / model.scale
    projected = z @ model.components[:k].T
    return FeatureMatrix(projected, m.labels, component_descriptor(model, k))


def inverse_transform(model, projected):
    width = projected.n_cols
    if not 1 <= width <= model.n_components:
        raise ReductionError(
            "projection has %d columns, PCA model retains %d"
            % (width, model.n_components)
        )
    z = projected.values @ model.components[:width]
    restored = np.tile(model.column_means, (projected.n_rows, 1))
    restored[:, model.kept_indices] = z * model.scale + model.mean
    return FeatureMatrix(restored, projected.labels, model.descriptor)


def feature_importance(model, k, weighted=False):
    """Rank features by the absolute sum of their loadings over the first k axes.

    With ``weighted`` each axis contributes in proportion to its explained
    variance ratio.
    """
    _check_k(model, k)
    loadings = np.abs(model.components[:k])
    if weighted:
        loadings = loadings * model.explained_variance_ratio[:k, None]
    scores = loadings.sum(axis=0)
    names = model.descriptor.feature_names
    entries = sorted(
        (
            RankedFeature(name=names[j], index=int(j), score=float(score))
            for j, score in zip(model.kept_indices, scores)
        ),
        key=lambda entry: (-entry.score, entry.index),
    )
    dropped = tuple(names[j] for j in model.dropped_indices)
    return FeatureRanking(entries=tuple(entries), dropped=dropped, k=k, weighted=weighted)


def pc_scatter_export(model, m):
    if model.n_components < 2:
        raise ReductionError("scatter export needs at least 2 components")
    projected = transform(model, m, 2)
    return pd.DataFrame(
        {
            "pc1": projected.values[:, 0],
            "pc2": projected.values[:, 1],
            "label": projected.labels,
        }
    )


def ranking_frame(ranking):
    rows = [
        {"rank": position, "feature_name": entry.name, "score": entry.score}
        for position, entry in enumerate(ranking.entries, start=1)
    ]
    # constant features were never ranked; they close the table with score 0
    rows.extend(
        {"rank": len(ranking.entries) + position, "feature_name": name, "score": 0.0}
        for position, name in enumerate(ranking.dropped, start=1)
    )
    return pd.DataFrame(rows, columns=["rank", "feature_name", "score"])


def write_ranking_csv(ranking, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ranking_frame(ranking).to_csv(path, index=False, float_format="%.10g")
    return path


def write_scatter_csv(frame, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    return path
