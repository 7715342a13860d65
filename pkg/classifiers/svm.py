"""Support vector machines trained with simplified SMO.

Each step picks a KKT-violating multiplier ``i`` in sweep order and a random
partner ``j``, optimises the pair analytically and refreshes an error cache
from the two kernel rows involved. Kernel rows are computed on demand.
"""
import logging
from dataclasses import dataclass

import numpy as np

from classifiers.models import Kernel

logger = logging.getLogger(__name__)

ALPHA_STEP = 1e-5
MIN_EXAMINATIONS = 100


@dataclass(frozen=True, eq=False)
class KernelSpec:
    kind: str
    gamma: float
    degree: int = 3
    coef0: float = 0.0

    def __call__(self, a, b):
        if self.kind == Kernel.LINEAR:
            return a @ b.T
        if self.kind == Kernel.POLY:
            return (self.gamma * (a @ b.T) + self.coef0) ** self.degree
        if self.kind == Kernel.SIGMOID:
            return np.tanh(self.gamma * (a @ b.T) + self.coef0)
        distances = (
            np.sum(a * a, axis=1)[:, None]
            + np.sum(b * b, axis=1)[None, :]
            - 2.0 * a @ b.T
        )
        return np.exp(-self.gamma * np.maximum(distances, 0.0))


@dataclass(frozen=True, eq=False)
class BinaryMachine:
    support_vectors: np.ndarray
    coefficients: np.ndarray
    bias: float
    converged: bool
    examinations: int

    def decision_function(self, kernel, x):
        if self.coefficients.size == 0:
            return np.full(x.shape[0], self.bias)
        return kernel(x, self.support_vectors) @ self.coefficients + self.bias


@dataclass(frozen=True, eq=False)
class SvmState:
    """One machine for two classes (class_list[1] is +1), one per class otherwise."""

    kernel: KernelSpec
    machines: tuple

    @property
    def converged(self):
        return all(machine.converged for machine in self.machines)


def default_gamma(x):
    variance = float(np.mean(x.var(axis=0)))
    if variance <= 0.0:
        return 1.0
    return 1.0 / (x.shape[1] * variance)


def smo(x, y, kernel, C, tol, max_passes, max_examinations, rng):
    """Train one binary machine on labels ``y`` in {-1, +1}."""
    n = y.size
    alphas = np.zeros(n)
    bias = 0.0
    errors = -y.astype(np.float64)
    diagonal = np.array([kernel(x[i : i + 1], x[i : i + 1])[0, 0] for i in range(n)])
    passes = 0
    examinations = 0
    while passes < max_passes and examinations < max_examinations:
        changed = 0
        for i in range(n):
            if examinations >= max_examinations:
                break
            examinations += 1
            Ei = errors[i]
            violates = (y[i] * Ei < -tol and alphas[i] < C) or (
                y[i] * Ei > tol and alphas[i] > 0
            )
            if not violates or n < 2:
                continue
            j = int(rng.integers(0, n - 1))
            if j >= i:
                j += 1
            Ej = errors[j]
            alphaI, alphaJ = alphas[i], alphas[j]
            if y[i] != y[j]:
                low, high = max(0.0, alphaJ - alphaI), min(C, C + alphaJ - alphaI)
            else:
                low, high = max(0.0, alphaI + alphaJ - C), min(C, alphaI + alphaJ)
            if low == high:
                continue
            Kij = kernel(x[i : i + 1], x[j : j + 1])[0, 0]
            eta = 2.0 * Kij - diagonal[i] - diagonal[j]
            if eta >= 0:
                continue
            newJ = float(np.clip(alphaJ - y[j] * (Ei - Ej) / eta, low, high))
            if abs(newJ - alphaJ) < ALPHA_STEP:
                continue
            newI = alphaI + y[i] * y[j] * (alphaJ - newJ)
            deltaI = y[i] * (newI - alphaI)
            deltaJ = y[j] * (newJ - alphaJ)
            b1 = bias - Ei - deltaI * diagonal[i] - deltaJ * Kij
            b2 = bias - Ej - deltaI * Kij - deltaJ * diagonal[j]
            if 0 < newI < C:
                newBias = b1
            elif 0 < newJ < C:
                newBias = b2
            else:
                newBias = 0.5 * (b1 + b2)
            rows = kernel(x[[i, j]], x)
            errors += deltaI * rows[0] + deltaJ * rows[1] + (newBias - bias)
            alphas[i], alphas[j] = newI, newJ
            bias = newBias
            changed += 1
        passes = passes + 1 if changed == 0 else 0
    converged = passes >= max_passes
    support = np.flatnonzero(alphas > 0)
    return BinaryMachine(
        support_vectors=x[support].copy(),
        coefficients=alphas[support] * y[support],
        bias=float(bias),
        converged=converged,
        examinations=examinations,
    )


def fit_svm(x, targets, n_classes, params, rng):
    """Fit on class indices ``targets``; multiclass problems go one-vs-rest."""
    gamma = params.gamma if params.gamma is not None else default_gamma(x)
    kernel = KernelSpec(
        kind=params.kernel, gamma=gamma, degree=params.degree, coef0=params.coef0
    )
    cap = params.max_iter or max(10 * targets.size, MIN_EXAMINATIONS)
    if n_classes == 2:
        positives = [1]
    else:
        positives = list(range(n_classes))
    machines = []
    for positive in positives:
        y = np.where(targets == positive, 1.0, -1.0)
        machine = smo(x, y, kernel, params.C, params.tol, params.max_passes, cap, rng)
        if not machine.converged:
            logger.info(
                "SMO stopped after %d examinations without converging", machine.examinations
            )
        machines.append(machine)
    return SvmState(kernel=kernel, machines=tuple(machines))


def svm_scores(state, x):
    """Decision values per class: ``[-f, f]`` for two classes, one column per machine otherwise."""
    values = np.column_stack(
        [machine.decision_function(state.kernel, x) for machine in state.machines]
    )
    if len(state.machines) == 1:
        return np.column_stack([-values[:, 0], values[:, 0]])
    return values
