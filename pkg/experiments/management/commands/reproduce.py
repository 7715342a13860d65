from pathlib import Path

from django.conf import settings

from classifiers.models import Algorithm
from core.utils.commands import BenchmarkCommand
from core.utils.notices import NoticeLog
from core.utils.utils import formatPercent
from experiments.management.commands.evaluate import parse_classifiers
from experiments.serializers import manifest_document, write_manifest
from experiments.services import render_table, run_full_suite


class Command(BenchmarkCommand):
    help = (
        "Run the full-feature and PCA experiments over every dataset in the data "
        "directory and write all metric tables and the feature ranking."
    )

    def add_arguments(self, parser):
        parser.add_argument("--data-dir", type=Path, default=settings.BENCHMARK["DATA_DIR"])
        parser.add_argument("--out", type=Path, default=settings.BENCHMARK["REPORT_DIR"])
        parser.add_argument("--seed", type=int, default=settings.BENCHMARK["SEED"])
        parser.add_argument("--classifier", default="all")
        parser.add_argument("--workers", type=int, default=settings.BENCHMARK["WORKERS"])
        parser.add_argument(
            "--variance", type=float, default=settings.BENCHMARK["VARIANCE_THRESHOLD"]
        )
        parser.add_argument("--top", type=int, default=settings.BENCHMARK["TOP_FEATURES"])

    def handle(self, *args, **options):
        if not 0.0 < options["variance"] <= 1.0:
            raise self.usage_error("--variance must lie in (0, 1]")
        if options["top"] < 1:
            raise self.usage_error("--top must be at least 1")
        if options["workers"] < 1:
            raise self.usage_error("--workers must be at least 1")
        classifiers = parse_classifiers(options["classifier"])
        unknown = sorted(set(classifiers) - set(Algorithm.values))
        if unknown or not classifiers:
            raise self.usage_error("unknown classifier: %s" % ", ".join(unknown or ["(none)"]))

        notices = NoticeLog()
        reports, rankings, datasets, artifacts = run_full_suite(
            options["data_dir"],
            options["out"],
            options["seed"],
            classifiers=classifiers,
            workers=options["workers"],
            variance_threshold=options["variance"],
            top_n=options["top"],
            notices=notices,
        )
        if not reports:
            self.stdout.write("no dataset found in %s" % options["data_dir"])
            return

        write_manifest(
            options["out"] / "manifest.json",
            manifest_document(reports[0].config, datasets, artifacts, notices),
        )
        for report in reports:
            self.stdout.write(
                "%s, %s features:" % (report.dataset_name, report.config.variant)
            )
            self.stdout.write(render_table(report), ending="")
        for ranking in rankings:
            self.stdout.write(
                "%s: %d components cover %s of the variance; top features: %s"
                % (
                    ranking.dataset,
                    ranking.n_components,
                    formatPercent(ranking.variance_covered),
                    ", ".join(entry.name for entry in ranking.listing()),
                )
            )
        if len(notices):
            self.stdout.write("%d notices recorded in manifest.json" % len(notices))
