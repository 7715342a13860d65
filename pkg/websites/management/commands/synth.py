from pathlib import Path

from django.conf import settings

from core.utils.commands import BenchmarkCommand
from websites.descriptors import DESCRIPTORS, get_descriptor
from websites.management.commands.ingest import count_summary
from websites.services import generate_synthetic, matrix_checksum, write_csv


class Command(BenchmarkCommand):
    help = "Write a seeded synthetic dataset shaped like one of the real schemas."

    def add_arguments(self, parser):
        parser.add_argument("--schema", required=True, choices=sorted(DESCRIPTORS))
        parser.add_argument("--rows", required=True, type=int)
        parser.add_argument("--seed", type=int, default=settings.BENCHMARK["SEED"])
        parser.add_argument("--separation", type=float, default=0.8)
        parser.add_argument("--out", required=True, type=Path)

    def handle(self, *args, **options):
        if options["rows"] < 2:
            raise self.usage_error("--rows must be at least 2")
        if not 0.0 <= options["separation"] <= 1.0:
            raise self.usage_error("--separation must lie in [0, 1]")
        matrix = generate_synthetic(
            get_descriptor(options["schema"]),
            options["rows"],
            options["seed"],
            options["separation"],
        )
        write_csv(matrix, options["out"])
        self.stdout.write(count_summary(matrix))
        self.stdout.write("sha256 %s" % matrix_checksum(matrix))
