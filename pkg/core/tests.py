import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core import __version__
from core.exceptions import ConfigurationError, DatasetError, InvalidHyperparams
from core.utils.commands import BenchmarkCommand
from core.utils.notices import NoticeLog
from core.utils.utils import (
    arrayChecksum,
    deriveSeeds,
    fileChecksum,
    formatPercent,
    getDictionaryOfLists,
)


class ArrayOfDictionariesToDictionaryOfArraysTest(SimpleTestCase):
    def setUp(self):
        self.myInput = [
            {"accuracy": 0.9, "recall": 0.8},
            {"accuracy": 0.7, "recall": 0.6},
            {"accuracy": 0.5, "recall": 0.4, "f1": 0.1},
        ]

    def test_getDictionaryOfLists_function(self):
        dict = getDictionaryOfLists(self.myInput)
        self.assertEqual(dict["accuracy"], [0.9, 0.7, 0.5])
        self.assertEqual(dict["recall"], [0.8, 0.6, 0.4])
        self.assertEqual(dict["f1"], [0.1])


class DeriveSeedsTest(SimpleTestCase):
    def test_splitmix_reference_values(self):
        self.assertEqual(deriveSeeds(0, 2), [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4])

    def test_deterministic_and_distinct(self):
        seeds = deriveSeeds(42, 50)
        self.assertEqual(seeds, deriveSeeds(42, 50))
        self.assertEqual(len(set(seeds)), 50)
        self.assertEqual(deriveSeeds(42, 3), seeds[:3])
        self.assertNotEqual(deriveSeeds(43, 3), seeds[:3])
        self.assertTrue(all(0 <= seed < 2**64 for seed in seeds))


class FormatPercentTest(SimpleTestCase):
    def test_two_decimals(self):
        self.assertEqual(formatPercent(0.9787), "97.87%")
        self.assertEqual(formatPercent(1.0), "100.00%")
        self.assertEqual(formatPercent(0.0), "0.00%")


class ChecksumTest(SimpleTestCase):
    def test_array_checksum_sees_dtype_and_shape(self):
        values = np.arange(6, dtype=np.float64)
        self.assertEqual(arrayChecksum(values), arrayChecksum(values.copy()))
        self.assertNotEqual(arrayChecksum(values), arrayChecksum(values.reshape(2, 3)))
        self.assertNotEqual(arrayChecksum(values), arrayChecksum(values.astype(np.float32)))

    def test_file_checksum(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "empty.csv"
            path.write_bytes(b"")
            self.assertEqual(
                fileChecksum(path),
                "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855",
            )


class NoticeLogTest(SimpleTestCase):
    def test_record(self):
        notices = NoticeLog()
        with self.assertLogs("core.utils.notices", level="WARNING"):
            notice = notices.record("undefined_metric", "precision is 0/0", metric="precision")
        self.assertEqual(len(notices), 1)
        self.assertEqual(notices.codes(), ["undefined_metric"])
        self.assertEqual(
            notice.as_dict(),
            {"code": "undefined_metric", "message": "precision is 0/0", "context": {"metric": "precision"}},
        )
        self.assertEqual(notices.as_list(), [notice.as_dict()])

    def test_extend(self):
        first, second = NoticeLog(), NoticeLog()
        first.record("dataset_missing", "no d1")
        second.extend(first)
        self.assertEqual([notice.code for notice in second], ["dataset_missing"])


class FailingCommand(BenchmarkCommand):
    ERRORS = {
        "config": ConfigurationError("bad flag"),
        "params": InvalidHyperparams("knn has no hyperparameter depth"),
        "data": DatasetError("missing file:\nd1.csv"),
        "io": FileNotFoundError("absent.csv"),
        "bug": ZeroDivisionError("division by zero"),
    }

    def add_arguments(self, parser):
        parser.add_argument("--fail")

    def handle(self, *args, **options):
        if options["fail"]:
            raise self.ERRORS[options["fail"]]
        self.stdout.write("ok")


class BenchmarkCommandTest(SimpleTestCase):
    def returncode(self, fail):
        with self.assertRaises(CommandError) as ctx:
            call_command(FailingCommand(), fail=fail, stdout=StringIO())
        return ctx.exception

    def test_exit_codes(self):
        self.assertEqual(self.returncode("config").returncode, 1)
        self.assertEqual(self.returncode("params").returncode, 1)
        self.assertEqual(self.returncode("data").returncode, 2)
        self.assertEqual(self.returncode("io").returncode, 2)
        with self.assertLogs("core.utils.commands", level="ERROR"):
            self.assertEqual(self.returncode("bug").returncode, 3)

    def test_messages_fit_on_one_line(self):
        self.assertEqual(str(self.returncode("data")), "missing file: d1.csv")

    def test_success(self):
        out = StringIO()
        call_command(FailingCommand(), stdout=out)
        self.assertEqual(out.getvalue().strip(), "ok")

    def test_version(self):
        self.assertIn("phishbench %s" % __version__, FailingCommand().get_version())
