import io
from pathlib import Path

from rest_framework import serializers
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from classifiers.models import Algorithm
from classifiers.serializers import build_params, format_errors
from core import REPORT_FORMAT_VERSION, __version__
from core.exceptions import ConfigurationError, InvalidHyperparams
from core.utils.utils import MASK64, fileChecksum
from experiments.models import ExperimentConfig, PcaSettings, Protocol
from scoring.models import Averaging
from websites.descriptors import DESCRIPTORS
from websites.serializers import ClassCountSerializer, DatasetDescriptorSerializer
from websites.services import class_counts, matrix_checksum


class ExperimentConfigSerializer(serializers.Serializer):
    dataset = serializers.ChoiceField(choices=sorted(DESCRIPTORS))
    classifiers = serializers.ListField(
        child=serializers.ChoiceField(choices=Algorithm.choices), allow_empty=False
    )
    protocol = serializers.ChoiceField(choices=Protocol.choices, default=Protocol.CV10)
    pca = serializers.BooleanField(default=False)
    variance_threshold = serializers.FloatField(default=0.95)
    standardize = serializers.BooleanField(default=True)
    seed = serializers.IntegerField(min_value=0, max_value=MASK64)
    overrides = serializers.DictField(child=serializers.DictField(), default=dict)
    averaging = serializers.ChoiceField(choices=Averaging.choices, default=Averaging.MACRO)
    folds = serializers.IntegerField(min_value=2, default=10)
    workers = serializers.IntegerField(min_value=1, default=1)

    def validate_variance_threshold(self, value):
        if not 0.0 < value <= 1.0:
            raise serializers.ValidationError("must lie in (0, 1]")
        return value

    def validate_overrides(self, value):
        for algorithm, overrides in value.items():
            if algorithm not in Algorithm.values:
                raise serializers.ValidationError("unknown classifier %r" % algorithm)
            try:
                build_params(algorithm, overrides)
            except InvalidHyperparams as exc:
                raise serializers.ValidationError(str(exc))
        return value

    def to_representation(self, instance):
        if isinstance(instance, ExperimentConfig):
            return {
                "dataset": instance.dataset,
                "classifiers": [str(algorithm) for algorithm in instance.classifiers],
                "protocol": str(instance.protocol),
                "pca": instance.pca.enabled,
                "variance_threshold": instance.pca.variance_threshold,
                "standardize": instance.pca.standardize,
                "seed": instance.seed,
                "overrides": instance.overrides,
                "averaging": str(instance.averaging),
                "folds": instance.folds,
                "workers": instance.workers,
            }
        return super().to_representation(instance)

    def create(self, validated_data):
        data = dict(validated_data)
        pca = PcaSettings(
            enabled=data.pop("pca"),
            variance_threshold=data.pop("variance_threshold"),
            standardize=data.pop("standardize"),
        )
        return ExperimentConfig(pca=pca, **data)


def build_config(data):
    """Validated ExperimentConfig from plain values."""
    serializer = ExperimentConfigSerializer(data=data)
    if not serializer.is_valid():
        raise ConfigurationError("invalid experiment configuration: %s" % format_errors(serializer.errors))
    return serializer.save()


class DatasetEntrySerializer(serializers.Serializer):
    id = serializers.CharField()
    path = serializers.CharField()
    file_sha256 = serializers.CharField()
    matrix_sha256 = serializers.CharField()
    rows = serializers.IntegerField()
    class_counts = ClassCountSerializer(many=True)
    descriptor = DatasetDescriptorSerializer()


class ArtifactSerializer(serializers.Serializer):
    path = serializers.CharField()
    sha256 = serializers.CharField()


class NoticeSerializer(serializers.Serializer):
    code = serializers.CharField()
    message = serializers.CharField()
    context = serializers.DictField()


class ManifestSerializer(serializers.Serializer):
    """Everything needed to replay a run: configuration, inputs and outputs."""

    format_version = serializers.IntegerField()
    toolkit_version = serializers.CharField()
    config = ExperimentConfigSerializer()
    datasets = DatasetEntrySerializer(many=True)
    artifacts = ArtifactSerializer(many=True)
    timings = serializers.DictField(child=serializers.FloatField(), required=False)
    notices = NoticeSerializer(many=True)

    def validate_format_version(self, value):
        if value != REPORT_FORMAT_VERSION:
            raise serializers.ValidationError("unsupported manifest format %r" % value)
        return value


def dataset_entry(path, matrix):
    return {
        "id": matrix.descriptor.id,
        "path": str(path),
        "file_sha256": fileChecksum(path),
        "matrix_sha256": matrix_checksum(matrix),
        "rows": matrix.n_rows,
        "class_counts": [
            {"label": label, "count": count} for label, count in class_counts(matrix).items()
        ],
        "descriptor": matrix.descriptor,
    }


def manifest_document(config, datasets, artifacts, notices, timings=None):
    """``datasets`` is a list of ``(path, matrix)``; ``artifacts`` a list of paths."""
    document = {
        "format_version": REPORT_FORMAT_VERSION,
        "toolkit_version": __version__,
        "config": ExperimentConfigSerializer(config).data,
        "datasets": DatasetEntrySerializer(
            [dataset_entry(path, matrix) for path, matrix in datasets], many=True
        ).data,
        "artifacts": [
            {"path": Path(path).name, "sha256": fileChecksum(path)} for path in artifacts
        ],
        "notices": NoticeSerializer([notice.as_dict() for notice in notices], many=True).data,
    }
    if timings is not None:
        document["timings"] = timings
    return document


def write_manifest(path, document):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(JSONRenderer().render(document))
    return path


def read_manifest(path):
    """Validated manifest data with the configuration rebuilt."""
    try:
        document = JSONParser().parse(io.BytesIO(Path(path).read_bytes()))
    except ParseError as exc:
        raise ConfigurationError("%s: %s" % (path, exc.detail))
    serializer = ManifestSerializer(data=document)
    if not serializer.is_valid():
        raise ConfigurationError("%s: %s" % (path, format_errors(serializer.errors)))
    data = serializer.validated_data
    config = ExperimentConfigSerializer().create(data["config"])
    return config, data
