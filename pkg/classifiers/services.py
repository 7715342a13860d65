import io
import logging
from pathlib import Path

import numpy as np
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from classifiers.bayes import bayes_scores, fit_bayes
from classifiers.forest import forest_scores, grow_forest
from classifiers.models import (
    Algorithm,
    ConstantState,
    PredictionVector,
    STANDARDIZED_ALGORITHMS,
    Standardizer,
    TrainedClassifier,
)
from classifiers.neighbors import NeighborsState, neighbor_scores
from classifiers.network import network_scores, train_network
from classifiers.serializers import (
    TrainedClassifierSerializer,
    build_params,
    format_errors,
    validate_params,
)
from classifiers.svm import fit_svm, svm_scores
from classifiers.tree import grow_tree, tree_scores
from core.exceptions import ClassifierError
from core.utils.notices import NoticeLog

logger = logging.getLogger(__name__)


def _targets(labels, class_list):
    codes = np.array([int(label) for label in class_list], dtype=np.int64)
    return np.searchsorted(codes, labels)


def fit(algorithm, train, params=None, notices=None, validation=None):
    """Train one classifier on ``train``.

    ``validation`` is only used by the neural network, which keeps the
    weights of its best validation epoch.
    """
    algorithm = Algorithm(algorithm)
    notices = notices if notices is not None else NoticeLog()
    params = build_params(algorithm) if params is None else validate_params(algorithm, params)
    if train.n_rows == 0:
        raise ClassifierError("empty training set")

    classList = train.present_classes()
    if len(classList) == 1:
        notices.record(
            "single_class_training",
            "%s saw only %s rows; predicting that class for everything"
            % (algorithm.label, classList[0].label),
            algorithm=algorithm.value,
        )
        return TrainedClassifier(
            algorithm=algorithm,
            params=params,
            class_list=classList,
            n_features=train.n_cols,
            state=ConstantState(class_index=0),
            flags=("constant",),
        )

    nClasses = len(classList)
    targets = _targets(train.labels, classList)
    x = train.values
    standardizer = None
    if algorithm in STANDARDIZED_ALGORITHMS:
        standardizer = Standardizer.fit(x)
        x = standardizer.apply(x)
    rng = np.random.default_rng(params.seed)
    flags = ()

    if algorithm == Algorithm.DTREE:
        state = grow_tree(
            x,
            targets,
            nClasses,
            max_depth=params.max_depth,
            min_samples_split=params.min_samples_split,
        )
    elif algorithm == Algorithm.RF:
        state = grow_forest(x, targets, nClasses, params)
    elif algorithm == Algorithm.NB:
        state = fit_bayes(x, targets, nClasses, params)
    elif algorithm == Algorithm.KNN:
        state = NeighborsState(values=train.values.copy(), targets=targets, k=params.k)
    elif algorithm == Algorithm.SVM:
        state = fit_svm(x, targets, nClasses, params, rng)
        if not state.converged:
            flags = ("not_converged",)
            notices.record(
                "svm_not_converged",
                "SMO reached its examination cap before converging; keeping the last iterate",
                examinations=[machine.examinations for machine in state.machines],
            )
    else:
        heldOut = None
        if validation is not None and validation.n_rows:
            known = np.isin(validation.labels, [int(label) for label in classList])
            heldOut = (
                standardizer.apply(validation.values[known]),
                _targets(validation.labels[known], classList),
            )
        state = train_network(x, targets, nClasses, params, rng, validation=heldOut)

    logger.debug("fitted %s on %d rows", algorithm.label, train.n_rows)
    return TrainedClassifier(
        algorithm=algorithm,
        params=params,
        class_list=classList,
        n_features=train.n_cols,
        state=state,
        standardizer=standardizer,
        flags=flags,
    )


def fit_svm_smo(train, params=None, notices=None):
    return fit(Algorithm.SVM, train, params, notices)


def fit_random_forest(train, params=None, notices=None):
    return fit(Algorithm.RF, train, params, notices)


def _check_width(model, test):
    if test.n_cols != model.n_features:
        raise ClassifierError(
            "test matrix has %d features, model was trained on %d"
            % (test.n_cols, model.n_features)
        )


def class_scores(model, values):
    if model.is_constant:
        return np.ones((values.shape[0], 1))
    nClasses = len(model.class_list)
    x = model.standardizer.apply(values) if model.standardizer is not None else values
    algorithm = Algorithm(model.algorithm)
    if algorithm == Algorithm.DTREE:
        return tree_scores(model.state, x)
    if algorithm == Algorithm.RF:
        return forest_scores(model.state, x, nClasses)
    if algorithm == Algorithm.NB:
        return bayes_scores(model.state, x)
    if algorithm == Algorithm.KNN:
        reference = model.standardizer.apply(model.state.values)
        return neighbor_scores(model.state, x, reference, nClasses)
    if algorithm == Algorithm.SVM:
        return svm_scores(model.state, x)
    return network_scores(model.state, x)


def predict(model, test):
    _check_width(model, test)
    scores = class_scores(model, test.values)
    winners = np.argmax(scores, axis=1)
    return PredictionVector(
        labels=model.class_codes()[winners],
        scores=scores,
        probabilistic=Algorithm(model.algorithm) != Algorithm.SVM or model.is_constant,
        class_list=model.class_list,
    )


def decision_function(model, test):
    """Raw SVM margins: one column for two classes, one per class otherwise."""
    if Algorithm(model.algorithm) != Algorithm.SVM or model.is_constant:
        raise ClassifierError("decision values exist only for fitted SVMs")
    _check_width(model, test)
    scores = svm_scores(model.state, model.standardizer.apply(test.values))
    if len(model.class_list) == 2:
        return scores[:, 1]
    return scores


# ---------------------------------------------------------------- persistence


def model_document(model):
    return TrainedClassifierSerializer(model).data


def model_from_document(document):
    serializer = TrainedClassifierSerializer(data=document)
    if not serializer.is_valid():
        raise ClassifierError("invalid model document: %s" % format_errors(serializer.errors))
    return serializer.save()


def save_model(model, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(JSONRenderer().render(model_document(model)))
    return path


def load_model(path):
    try:
        document = JSONParser().parse(io.BytesIO(Path(path).read_bytes()))
    except ParseError as exc:
        raise ClassifierError("%s: %s" % (path, exc.detail))
    return model_from_document(document)
