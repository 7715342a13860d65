from dataclasses import asdict

import numpy as np
from rest_framework import serializers

from classifiers.bayes import CategoricalBayesState, GaussianBayesState
from classifiers.forest import ForestState
from classifiers.models import (
    Algorithm,
    BayesParams,
    BayesVariant,
    ConstantState,
    ForestParams,
    Kernel,
    NeighborsParams,
    NetworkParams,
    PARAMS_BY_ALGORITHM,
    Standardizer,
    SvmParams,
    TrainedClassifier,
    TreeParams,
)
from classifiers.neighbors import NeighborsState
from classifiers.network import NetworkState
from classifiers.svm import BinaryMachine, KernelSpec, SvmState
from classifiers.tree import TreeState
from core import MODEL_FORMAT_VERSION
from core.exceptions import InvalidHyperparams
from core.utils.utils import MASK64
from websites.models import ClassLabel


def format_errors(errors):
    if isinstance(errors, dict):
        return "; ".join("%s: %s" % (key, format_errors(value)) for key, value in errors.items())
    if isinstance(errors, (list, tuple)):
        return " ".join(format_errors(error) for error in errors)
    return str(errors)


def positive(value):
    if value <= 0:
        raise serializers.ValidationError("must be greater than 0")


def unit_interval(value):
    if not 0 <= value < 1:
        raise serializers.ValidationError("must lie in [0, 1)")


class ReprFloatField(serializers.Field):
    """Float written as its shortest round-trip decimal string."""

    def to_representation(self, value):
        return repr(float(value))

    def to_internal_value(self, data):
        try:
            return float(data)
        except (TypeError, ValueError):
            raise serializers.ValidationError("not a number: %r" % (data,))


class ArrayField(serializers.Field):
    def to_representation(self, value):
        array = np.asarray(value)
        if array.dtype.kind == "f":
            data = [repr(float(item)) for item in array.ravel()]
        elif array.dtype.kind == "b":
            data = [bool(item) for item in array.ravel()]
        else:
            data = [int(item) for item in array.ravel()]
        return {"dtype": str(array.dtype), "shape": list(array.shape), "data": data}

    def to_internal_value(self, data):
        try:
            dtype = np.dtype(data["dtype"])
            shape = tuple(int(size) for size in data["shape"])
            cast = float if dtype.kind == "f" else int
            items = [cast(item) for item in data["data"]]
            return np.array(items, dtype=dtype).reshape(shape)
        except (KeyError, TypeError, ValueError) as exc:
            raise serializers.ValidationError("malformed array: %s" % exc)


# ---------------------------------------------------------------- hyperparameters


class HyperparamsSerializer(serializers.Serializer):
    params_class = None

    seed = serializers.IntegerField(min_value=0, max_value=MASK64)

    def to_params(self):
        return self.params_class(**self.validated_data)


class TreeParamsSerializer(HyperparamsSerializer):
    params_class = TreeParams

    max_depth = serializers.IntegerField(min_value=1, allow_null=True)
    min_samples_split = serializers.IntegerField(min_value=2)


class ForestParamsSerializer(HyperparamsSerializer):
    params_class = ForestParams

    trees = serializers.IntegerField(min_value=1)
    bootstrap = serializers.BooleanField()
    feature_subsampling = serializers.BooleanField()
    max_depth = serializers.IntegerField(min_value=1, allow_null=True)
    min_samples_split = serializers.IntegerField(min_value=2)


class BayesParamsSerializer(HyperparamsSerializer):
    params_class = BayesParams

    variant = serializers.ChoiceField(choices=BayesVariant.choices)
    alpha = serializers.FloatField(validators=[positive])
    var_floor = serializers.FloatField(validators=[positive])


class NeighborsParamsSerializer(HyperparamsSerializer):
    params_class = NeighborsParams

    k = serializers.IntegerField(min_value=1)


class SvmParamsSerializer(HyperparamsSerializer):
    params_class = SvmParams

    C = serializers.FloatField(validators=[positive])
    kernel = serializers.ChoiceField(choices=Kernel.choices)
    gamma = serializers.FloatField(allow_null=True, validators=[positive])
    degree = serializers.IntegerField(min_value=1)
    coef0 = serializers.FloatField()
    tol = serializers.FloatField(validators=[positive])
    max_passes = serializers.IntegerField(min_value=1)
    max_iter = serializers.IntegerField(min_value=1, allow_null=True)


class NetworkParamsSerializer(HyperparamsSerializer):
    params_class = NetworkParams

    hidden = serializers.IntegerField(min_value=1)
    learning_rate = serializers.FloatField(validators=[positive])
    beta1 = serializers.FloatField(validators=[unit_interval])
    beta2 = serializers.FloatField(validators=[unit_interval])
    epsilon = serializers.FloatField(validators=[positive])
    batch_size = serializers.IntegerField(min_value=1)
    epochs = serializers.IntegerField(min_value=1)


PARAMS_SERIALIZERS = {
    Algorithm.DTREE: TreeParamsSerializer,
    Algorithm.SVM: SvmParamsSerializer,
    Algorithm.RF: ForestParamsSerializer,
    Algorithm.NB: BayesParamsSerializer,
    Algorithm.KNN: NeighborsParamsSerializer,
    Algorithm.ANN: NetworkParamsSerializer,
}


def build_params(algorithm, overrides=None, seed=0):
    """Default hyperparameters for ``algorithm`` with validated overrides applied."""
    algorithm = Algorithm(algorithm)
    defaults = asdict(PARAMS_BY_ALGORITHM[algorithm](seed=seed))
    overrides = dict(overrides or {})
    unknown = sorted(set(overrides) - set(defaults))
    if unknown:
        raise InvalidHyperparams(
            "%s has no hyperparameter %s" % (algorithm.value, ", ".join(unknown))
        )
    serializer = PARAMS_SERIALIZERS[algorithm](data={**defaults, **overrides})
    if not serializer.is_valid():
        raise InvalidHyperparams(
            "%s: %s" % (algorithm.value, format_errors(serializer.errors))
        )
    return serializer.to_params()


def validate_params(algorithm, params):
    algorithm = Algorithm(algorithm)
    if not isinstance(params, PARAMS_BY_ALGORITHM[algorithm]):
        raise InvalidHyperparams(
            "%s expects %s, got %s"
            % (algorithm.value, PARAMS_BY_ALGORITHM[algorithm].__name__, type(params).__name__)
        )
    serializer = PARAMS_SERIALIZERS[algorithm](data=asdict(params))
    if not serializer.is_valid():
        raise InvalidHyperparams(
            "%s: %s" % (algorithm.value, format_errors(serializer.errors))
        )
    return params


# ---------------------------------------------------------------- fitted state


class StateSerializer(serializers.Serializer):
    state_class = None

    def create(self, validated_data):
        return self.state_class(**validated_data)


class StandardizerSerializer(StateSerializer):
    state_class = Standardizer

    mean = ArrayField()
    scale = ArrayField()


class ConstantStateSerializer(StateSerializer):
    state_class = ConstantState

    class_index = serializers.IntegerField(min_value=0)


class TreeStateSerializer(StateSerializer):
    state_class = TreeState

    feature = ArrayField()
    threshold = ArrayField()
    left = ArrayField()
    right = ArrayField()
    value = ArrayField()


class ForestStateSerializer(StateSerializer):
    state_class = ForestState

    trees = TreeStateSerializer(many=True)

    def create(self, validated_data):
        return ForestState(
            trees=tuple(TreeState(**tree) for tree in validated_data["trees"])
        )


class GaussianBayesStateSerializer(StateSerializer):
    state_class = GaussianBayesState

    log_prior = ArrayField()
    means = ArrayField()
    variances = ArrayField()


class CategoricalBayesStateSerializer(StateSerializer):
    state_class = CategoricalBayesState

    log_prior = ArrayField()
    levels = serializers.ListField(child=ArrayField())
    log_likelihood = serializers.ListField(child=ArrayField())
    unseen = serializers.ListField(child=ArrayField())

    def create(self, validated_data):
        return CategoricalBayesState(
            log_prior=validated_data["log_prior"],
            levels=tuple(validated_data["levels"]),
            log_likelihood=tuple(validated_data["log_likelihood"]),
            unseen=tuple(validated_data["unseen"]),
        )


class NeighborsStateSerializer(StateSerializer):
    state_class = NeighborsState

    values = ArrayField()
    targets = ArrayField()
    k = serializers.IntegerField(min_value=1)


class KernelSpecSerializer(StateSerializer):
    state_class = KernelSpec

    kind = serializers.ChoiceField(choices=Kernel.choices)
    gamma = ReprFloatField()
    degree = serializers.IntegerField(min_value=1)
    coef0 = ReprFloatField()


class BinaryMachineSerializer(StateSerializer):
    state_class = BinaryMachine

    support_vectors = ArrayField()
    coefficients = ArrayField()
    bias = ReprFloatField()
    converged = serializers.BooleanField()
    examinations = serializers.IntegerField(min_value=0)


class SvmStateSerializer(StateSerializer):
    state_class = SvmState

    kernel = KernelSpecSerializer()
    machines = BinaryMachineSerializer(many=True)

    def create(self, validated_data):
        return SvmState(
            kernel=KernelSpec(**validated_data["kernel"]),
            machines=tuple(BinaryMachine(**machine) for machine in validated_data["machines"]),
        )


class NetworkStateSerializer(StateSerializer):
    state_class = NetworkState

    w1 = ArrayField()
    b1 = ArrayField()
    w2 = ArrayField()
    b2 = ArrayField()
    epochs_run = serializers.IntegerField(min_value=0)
    best_epoch = serializers.IntegerField(min_value=0)


STATE_SERIALIZERS = {
    "constant": ConstantStateSerializer,
    "tree": TreeStateSerializer,
    "forest": ForestStateSerializer,
    "gaussian_bayes": GaussianBayesStateSerializer,
    "categorical_bayes": CategoricalBayesStateSerializer,
    "neighbors": NeighborsStateSerializer,
    "svm": SvmStateSerializer,
    "network": NetworkStateSerializer,
}


def state_kind(state):
    for kind, serializerClass in STATE_SERIALIZERS.items():
        if type(state) is serializerClass.state_class:
            return kind
    raise TypeError("no serializer for %s" % type(state).__name__)


class TrainedClassifierSerializer(serializers.BaseSerializer):
    """Versioned JSON document for a fitted classifier."""

    def to_representation(self, instance):
        kind = state_kind(instance.state)
        standardizer = None
        if instance.standardizer is not None:
            standardizer = StandardizerSerializer(instance.standardizer).data
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "algorithm": str(instance.algorithm),
            "hyperparams": PARAMS_SERIALIZERS[Algorithm(instance.algorithm)](
                instance.params
            ).data,
            "class_list": [int(label) for label in instance.class_list],
            "n_features": instance.n_features,
            "standardizer": standardizer,
            "state_kind": kind,
            "state": STATE_SERIALIZERS[kind](instance.state).data,
            "flags": list(instance.flags),
        }

    def to_internal_value(self, data):
        if not isinstance(data, dict):
            raise serializers.ValidationError("model document must be an object")
        if data.get("format_version") != MODEL_FORMAT_VERSION:
            raise serializers.ValidationError(
                {"format_version": "unsupported model format %r" % data.get("format_version")}
            )
        try:
            algorithm = Algorithm(data.get("algorithm"))
        except ValueError:
            raise serializers.ValidationError({"algorithm": "unknown algorithm"})
        try:
            classList = tuple(ClassLabel(int(code)) for code in data["class_list"])
            nFeatures = int(data["n_features"])
            kind = data["state_kind"]
        except (KeyError, TypeError, ValueError) as exc:
            raise serializers.ValidationError("malformed model document: %s" % exc)
        if kind not in STATE_SERIALIZERS:
            raise serializers.ValidationError({"state_kind": "unknown state %r" % kind})

        paramsSerializer = PARAMS_SERIALIZERS[algorithm](data=data.get("hyperparams"))
        paramsSerializer.is_valid(raise_exception=True)
        stateSerializer = STATE_SERIALIZERS[kind](data=data.get("state"))
        stateSerializer.is_valid(raise_exception=True)
        standardizer = None
        if data.get("standardizer") is not None:
            standardizerSerializer = StandardizerSerializer(data=data["standardizer"])
            standardizerSerializer.is_valid(raise_exception=True)
            standardizer = standardizerSerializer.save()
        return {
            "algorithm": algorithm,
            "params": paramsSerializer.to_params(),
            "class_list": classList,
            "n_features": nFeatures,
            "state": stateSerializer.save(),
            "standardizer": standardizer,
            "flags": tuple(data.get("flags") or ()),
        }

    def create(self, validated_data):
        return TrainedClassifier(**validated_data)
