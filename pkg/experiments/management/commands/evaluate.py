import time
from pathlib import Path

from django.conf import settings

from classifiers.models import Algorithm
from core.utils.commands import BenchmarkCommand
from core.utils.notices import NoticeLog
from experiments.models import Protocol, Stage
from experiments.serializers import build_config, manifest_document, read_manifest, write_manifest
from experiments.services import render_table, run_experiment, write_report
from scoring.models import Averaging
from websites.descriptors import DESCRIPTORS, get_descriptor
from websites.services import detect_descriptor, load_dataset


def parse_classifiers(value):
    if value == "all":
        return [algorithm.value for algorithm in Algorithm]
    return [name.strip().lower() for name in value.split(",") if name.strip()]


def parse_param_overrides(values):
    """``ALG.NAME=VALUE`` flags grouped by algorithm."""
    overrides = {}
    for value in values:
        target, separator, setting = value.partition("=")
        algorithm, dot, name = target.partition(".")
        if not separator or not dot or not name:
            raise ValueError("--param expects ALG.NAME=VALUE, got %r" % value)
        overrides.setdefault(algorithm.strip().lower(), {})[name.strip()] = setting.strip()
    return overrides


class Command(BenchmarkCommand):
    help = "Cross-validate classifiers on one dataset, optionally after PCA reduction."

    def add_arguments(self, parser):
        parser.add_argument("--input", type=Path)
        parser.add_argument("--dataset", choices=sorted(DESCRIPTORS))
        parser.add_argument("--classifier", default="all")
        parser.add_argument("--protocol", choices=Protocol.values, default=Protocol.CV10)
        parser.add_argument("--pca", action="store_true")
        parser.add_argument(
            "--variance", type=float, default=settings.BENCHMARK["VARIANCE_THRESHOLD"]
        )
        parser.add_argument("--no-standardize", action="store_true")
        parser.add_argument("--seed", type=int, default=settings.BENCHMARK["SEED"])
        parser.add_argument("--report", type=Path, default=settings.BENCHMARK["REPORT_DIR"])
        parser.add_argument("--manifest", type=Path)
        parser.add_argument("--param", action="append", default=[])
        parser.add_argument("--workers", type=int, default=settings.BENCHMARK["WORKERS"])
        parser.add_argument("--averaging", choices=Averaging.values, default=Averaging.MACRO)

    def handle(self, *args, **options):
        if options["manifest"]:
            config, manifest = read_manifest(options["manifest"])
            entries = manifest["datasets"]
            path = options["input"] or Path(entries[0]["path"])
        else:
            if options["input"] is None:
                raise self.usage_error("--input is required unless --manifest is given")
            if not 0.0 < options["variance"] <= 1.0:
                raise self.usage_error("--variance must lie in (0, 1]")
            try:
                overrides = parse_param_overrides(options["param"])
            except ValueError as exc:
                raise self.usage_error(str(exc))
            path = options["input"]
            if options["dataset"]:
                datasetId = options["dataset"]
            else:
                datasetId = detect_descriptor(path).id
            config = build_config(
                {
                    "dataset": datasetId,
                    "classifiers": parse_classifiers(options["classifier"]),
                    "protocol": options["protocol"],
                    "pca": options["pca"],
                    "variance_threshold": options["variance"],
                    "standardize": not options["no_standardize"],
                    "seed": options["seed"],
                    "overrides": overrides,
                    "averaging": options["averaging"],
                    "folds": settings.BENCHMARK["FOLDS"],
                    "workers": options["workers"],
                }
            )

        notices = NoticeLog()
        started = time.perf_counter()
        data = load_dataset(path, get_descriptor(config.dataset), notices)
        loaded = time.perf_counter() - started
        report = run_experiment(config, data, notices)
        artifacts = write_report(report, options["report"])
        timings = {Stage.LOAD.value: loaded, **report.timings}
        write_manifest(
            options["report"] / "manifest.json",
            manifest_document(config, [(path, data)], artifacts, notices, timings),
        )

        self.stdout.write(
            "%s, %s, %s features:"
            % (report.dataset_name, Protocol(config.protocol).label, config.variant)
        )
        self.stdout.write(render_table(report), ending="")
        if config.pca.enabled:
            counts = report.component_counts()
            self.stdout.write("principal components per fold: %s" % " ".join(map(str, counts)))
        if len(notices):
            self.stdout.write("%d notices recorded in manifest.json" % len(notices))
