from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from classifiers.models import BayesVariant


@dataclass(frozen=True, eq=False)
class GaussianBayesState:
    log_prior: np.ndarray
    means: np.ndarray
    variances: np.ndarray


@dataclass(frozen=True, eq=False)
class CategoricalBayesState:
    """Per-feature category levels seen in training and smoothed log likelihoods.

    ``log_likelihood[j]`` is a ``classes x levels[j]`` table; ``unseen[j]``
    holds the per-class log probability of a level absent from training.
    """

    log_prior: np.ndarray
    levels: tuple
    log_likelihood: tuple
    unseen: tuple


def _log_prior(y, n_classes):
    counts = np.bincount(y, minlength=n_classes).astype(np.float64)
    with np.errstate(divide="ignore"):
        return np.log(counts / counts.sum())


def fit_gaussian(x, y, n_classes, var_floor):
    means = np.zeros((n_classes, x.shape[1]))
    variances = np.ones((n_classes, x.shape[1]))
    for c in range(n_classes):
        rows = x[y == c]
        if rows.shape[0]:
            means[c] = rows.mean(axis=0)
            variances[c] = rows.var(axis=0)
    return GaussianBayesState(
        log_prior=_log_prior(y, n_classes),
        means=means,
        variances=np.maximum(variances, var_floor),
    )


def gaussian_joint_log_likelihood(state, x):
    joint = np.empty((x.shape[0], state.means.shape[0]))
    for c in range(state.means.shape[0]):
        variance = state.variances[c]
        joint[:, c] = state.log_prior[c] - 0.5 * np.sum(
            np.log(2.0 * np.pi * variance) + (x - state.means[c]) ** 2 / variance,
            axis=1,
        )
    return joint


def fit_categorical(x, y, n_classes, alpha):
    classCounts = np.bincount(y, minlength=n_classes).astype(np.float64)
    levels, tables, unseen = [], [], []
    for j in range(x.shape[1]):
        featureLevels = np.unique(x[:, j])
        counts = np.zeros((n_classes, featureLevels.size))
        positions = np.searchsorted(featureLevels, x[:, j])
        np.add.at(counts, (y, positions), 1.0)
        denominator = classCounts[:, None] + alpha * featureLevels.size
        levels.append(featureLevels)
        tables.append(np.log((counts + alpha) / denominator))
        unseen.append(np.log(alpha / denominator[:, 0]))
    return CategoricalBayesState(
        log_prior=_log_prior(y, n_classes),
        levels=tuple(levels),
        log_likelihood=tuple(tables),
        unseen=tuple(unseen),
    )


def categorical_joint_log_likelihood(state, x):
    joint = np.tile(state.log_prior, (x.shape[0], 1))
    for j, featureLevels in enumerate(state.levels):
        positions = np.searchsorted(featureLevels, x[:, j])
        clipped = np.minimum(positions, featureLevels.size - 1)
        known = featureLevels[clipped] == x[:, j]
        contribution = np.where(
            known[:, None],
            state.log_likelihood[j][:, clipped].T,
            state.unseen[j][None, :],
        )
        joint += contribution
    return joint


def fit_bayes(x, y, n_classes, params):
    if params.variant == BayesVariant.CATEGORICAL:
        return fit_categorical(x, y, n_classes, params.alpha)
    return fit_gaussian(x, y, n_classes, params.var_floor)


def bayes_scores(state, x):
    """Posterior class probabilities."""
    if isinstance(state, CategoricalBayesState):
        joint = categorical_joint_log_likelihood(state, x)
    else:
        joint = gaussian_joint_log_likelihood(state, x)
    return np.exp(joint - logsumexp(joint, axis=1, keepdims=True))
