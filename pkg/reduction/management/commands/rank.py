from pathlib import Path

from django.conf import settings

from core.utils.commands import BenchmarkCommand
from core.utils.notices import NoticeLog
from core.utils.utils import formatPercent
from reduction.services import (
    feature_importance,
    fit_pca,
    pc_scatter_export,
    select_components,
    write_ranking_csv,
    write_scatter_csv,
)
from websites.descriptors import DESCRIPTORS, get_descriptor
from websites.services import detect_descriptor, load_dataset


class Command(BenchmarkCommand):
    help = "Rank features by absolute PCA loading sums over the components covering a variance share."

    def add_arguments(self, parser):
        parser.add_argument("--input", required=True, type=Path)
        parser.add_argument("--dataset", choices=sorted(DESCRIPTORS))
        parser.add_argument(
            "--variance", type=float, default=settings.BENCHMARK["VARIANCE_THRESHOLD"]
        )
        parser.add_argument("--top", type=int, default=settings.BENCHMARK["TOP_FEATURES"])
        parser.add_argument("--weighted", action="store_true")
        parser.add_argument("--no-standardize", action="store_true")
        parser.add_argument("--out", type=Path)
        parser.add_argument("--scatter", type=Path)

    def handle(self, *args, **options):
        if not 0.0 < options["variance"] <= 1.0:
            raise self.usage_error("--variance must lie in (0, 1]")
        if options["top"] < 1:
            raise self.usage_error("--top must be at least 1")
        out = options["out"] or settings.BENCHMARK["REPORT_DIR"] / "feature_ranking.csv"

        if options["dataset"]:
            descriptor = get_descriptor(options["dataset"])
        else:
            descriptor = detect_descriptor(options["input"])
        notices = NoticeLog()
        matrix = load_dataset(options["input"], descriptor, notices)
        model = fit_pca(matrix, standardize=not options["no_standardize"], notices=notices)
        k = select_components(model, options["variance"])
        ranking = feature_importance(model, k, weighted=options["weighted"])
        write_ranking_csv(ranking, out)
        if options["scatter"]:
            write_scatter_csv(pc_scatter_export(model, matrix), options["scatter"])

        self.stdout.write(
            "%s: %d components cover %s of the variance"
            % (
                descriptor.name,
                k,
                formatPercent(model.cumulative_variance()[k - 1]),
            )
        )
        for position, entry in enumerate(ranking.top(options["top"]), start=1):
            self.stdout.write("%2d. %s (%.4f)" % (position, entry.name, entry.score))
