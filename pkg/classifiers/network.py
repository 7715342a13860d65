"""One-hidden-layer perceptron: ReLU hidden units, softmax output, Adam updates."""
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

PARAMETER_NAMES = ("w1", "b1", "w2", "b2")


@dataclass(frozen=True, eq=False)
class NetworkState:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    epochs_run: int = 0
    best_epoch: int = 0

    def parameters(self):
        return {name: getattr(self, name) for name in PARAMETER_NAMES}


def xavier_uniform(rng, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def initial_parameters(rng, n_features, hidden, n_classes):
    return {
        "w1": xavier_uniform(rng, n_features, hidden),
        "b1": np.zeros(hidden),
        "w2": xavier_uniform(rng, hidden, n_classes),
        "b2": np.zeros(n_classes),
    }


def forward(parameters, x):
    preActivation = x @ parameters["w1"] + parameters["b1"]
    hidden = np.maximum(preActivation, 0.0)
    logits = hidden @ parameters["w2"] + parameters["b2"]
    return preActivation, hidden, logits


def log_softmax(logits):
    return logits - logsumexp(logits, axis=1, keepdims=True)


def loss_and_gradients(parameters, x, onehot):
    """Mean cross-entropy and its gradient with respect to every parameter."""
    n = x.shape[0]
    preActivation, hidden, logits = forward(parameters, x)
    logProbabilities = log_softmax(logits)
    loss = -np.sum(onehot * logProbabilities) / n

    outputDelta = (np.exp(logProbabilities) - onehot) / n
    hiddenDelta = (outputDelta @ parameters["w2"].T) * (preActivation > 0)
    gradients = {
        "w1": x.T @ hiddenDelta,
        "b1": hiddenDelta.sum(axis=0),
        "w2": hidden.T @ outputDelta,
        "b2": outputDelta.sum(axis=0),
    }
    return loss, gradients


class AdamOptimizer:
    def __init__(self, parameters, learning_rate, beta1, beta2, epsilon):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.step = 0
        self.first = {name: np.zeros_like(value) for name, value in parameters.items()}
        self.second = {name: np.zeros_like(value) for name, value in parameters.items()}

    def update(self, parameters, gradients):
        self.step += 1
        correction1 = 1.0 - self.beta1**self.step
        correction2 = 1.0 - self.beta2**self.step
        for name in PARAMETER_NAMES:
            gradient = gradients[name]
            self.first[name] = self.beta1 * self.first[name] + (1.0 - self.beta1) * gradient
            self.second[name] = (
                self.beta2 * self.second[name] + (1.0 - self.beta2) * gradient * gradient
            )
            parameters[name] -= (
                self.learning_rate
                * (self.first[name] / correction1)
                / (np.sqrt(self.second[name] / correction2) + self.epsilon)
            )


def train_network(x, targets, n_classes, params, rng, validation=None):
    """Mini-batch Adam training for ``params.epochs`` epochs.

    ``validation`` is an optional ``(x, targets)`` pair; when given, the
    weights of the epoch with the lowest validation loss are kept (earliest
    on ties).
    """
    onehot = np.eye(n_classes)[targets]
    parameters = initial_parameters(rng, x.shape[1], params.hidden, n_classes)
    optimizer = AdamOptimizer(
        parameters, params.learning_rate, params.beta1, params.beta2, params.epsilon
    )
    if validation is not None:
        validationOnehot = np.eye(n_classes)[validation[1]]
        bestLoss = np.inf
    best = {name: value.copy() for name, value in parameters.items()}
    bestEpoch = 0
    for epoch in range(1, params.epochs + 1):
        order = rng.permutation(targets.size)
        for start in range(0, targets.size, params.batch_size):
            batch = order[start : start + params.batch_size]
            _, gradients = loss_and_gradients(parameters, x[batch], onehot[batch])
            optimizer.update(parameters, gradients)
        if validation is None:
            bestEpoch = epoch
            continue
        loss, _ = loss_and_gradients(parameters, validation[0], validationOnehot)
        if loss < bestLoss:
            bestLoss = loss
            bestEpoch = epoch
            best = {name: value.copy() for name, value in parameters.items()}
    if validation is None:
        best = parameters
    return NetworkState(epochs_run=params.epochs, best_epoch=bestEpoch, **best)


def network_scores(state, x):
    _, _, logits = forward(state.parameters(), x)
    return np.exp(log_softmax(logits))
