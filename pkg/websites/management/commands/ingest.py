from pathlib import Path

from core.utils.commands import BenchmarkCommand
from websites.descriptors import DESCRIPTORS, get_descriptor
from websites.models import DISPLAY_ORDER
from websites.services import class_counts, load_dataset, write_csv


def count_summary(matrix):
    counts = class_counts(matrix)
    present = [
        label
        for label in DISPLAY_ORDER
        if label in counts or label in matrix.descriptor.classes
    ]
    return "%d rows; %s" % (
        matrix.n_rows,
        ", ".join("%s %d" % (label.label, counts.get(label, 0)) for label in present),
    )


class Command(BenchmarkCommand):
    help = "Convert a dataset file (CSV or ARFF) into the canonical CSV layout."

    def add_arguments(self, parser):
        parser.add_argument("--dataset", required=True, choices=sorted(DESCRIPTORS))
        parser.add_argument("--input", required=True, type=Path)
        parser.add_argument("--out", required=True, type=Path)

    def handle(self, *args, **options):
        descriptor = get_descriptor(options["dataset"])
        matrix = load_dataset(options["input"], descriptor)
        write_csv(matrix, options["out"])
        self.stdout.write(count_summary(matrix))
