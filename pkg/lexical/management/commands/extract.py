from pathlib import Path

from django.conf import settings

from core.exceptions import UrlParseError
from core.utils.commands import BenchmarkCommand
from core.utils.notices import NoticeLog
from lexical.services import (
    extract_features,
    extract_file,
    parse_url,
    supported_features,
    write_rows,
)
from websites.descriptors import get_descriptor

SCHEMAS = ("d1", "d2")


class Command(BenchmarkCommand):
    help = (
        "Compute the URL-derivable features of a dataset schema for one URL or a "
        "file of URLs (one per line) and write them as CSV."
    )

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--url")
        source.add_argument("--file", type=Path)
        parser.add_argument("--schema", choices=SCHEMAS, default="d2")
        parser.add_argument("--out", type=Path)

    def handle(self, *args, **options):
        target = get_descriptor(options["schema"])
        out = options["out"] or settings.BENCHMARK["REPORT_DIR"] / (
            "url_features_%s.csv" % target.id
        )
        notices = NoticeLog()
        if options["url"] is not None:
            rows = [extract_features(parse_url(options["url"], notices), target)]
            failures = []
        else:
            rows, failures = extract_file(options["file"], target, notices)
            for number, text, message in failures:
                self.stderr.write("warning: line %d skipped: %s" % (number, message))
            if not rows:
                raise UrlParseError("%s: no parseable URL" % options["file"])

        write_rows(rows, target, out)
        supported = supported_features(target)
        if len(supported) < target.feature_count:
            notices.record(
                "heuristic_feature",
                "%d %s features need page content or lookups and are set to 0"
                % (target.feature_count - len(supported), target.name),
                unsupported=list(rows[0].unsupported),
            )
        self.stdout.write(
            "%d rows written to %s (%d malformed lines skipped)" % (len(rows), out, len(failures))
        )
        self.stdout.write(
            "%d of %d %s features come from the URL; the rest are 0 (heuristic provenance)"
            % (len(supported), target.feature_count, target.name)
        )
