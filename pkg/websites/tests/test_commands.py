import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from websites.descriptors import DATASET2, DATASET3
from websites.management.commands.ingest import count_summary
from websites.models import ClassLabel
from websites.services import load_csv

from .factories import SyntheticMatrixFactory, build_matrix


class CountSummaryTest(SimpleTestCase):
    def test_dataset_3_summary_order(self):
        labels = np.repeat(
            [
                int(ClassLabel.PHISHING),
                int(ClassLabel.SUSPICIOUS),
                int(ClassLabel.LEGITIMATE),
            ],
            [702, 103, 548],
        )
        matrix = build_matrix(np.zeros((1353, 9)), labels, DATASET3)
        self.assertEqual(
            count_summary(matrix),
            "1353 rows; Phishing 702, Legitimate 548, Suspicious 103",
        )

    def test_binary_dataset_summary(self):
        matrix = build_matrix(np.zeros((3, 30)), [-1, 1, 1], DATASET2)
        self.assertEqual(count_summary(matrix), "3 rows; Phishing 1, Legitimate 2")


class IngestCommandTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)
        header = ["index"] + list(DATASET2.feature_names) + ["Result"]
        rows = [
            ["1"] + ["-1"] * 30 + ["-1"],
            ["2"] + ["1"] * 30 + ["1"],
            ["3"] + ["0"] * 30 + ["1"],
        ]
        self.input = self.dir / "uci.csv"
        self.input.write_text(
            "\n".join(",".join(row) for row in [header] + rows) + "\n"
        )

    def test_ingest_writes_canonical_csv(self):
        out = StringIO()
        target = self.dir / "d2.csv"
        call_command(
            "ingest", dataset="d2", input=self.input, out=target, stdout=out
        )
        self.assertEqual(out.getvalue().strip(), "3 rows; Phishing 1, Legitimate 2")
        matrix = load_csv(target, DATASET2)
        self.assertEqual(matrix.labels.tolist(), [-1, 1, 1])

    def test_reingesting_output_is_idempotent(self):
        first = self.dir / "first.csv"
        second = self.dir / "second.csv"
        call_command("ingest", dataset="d2", input=self.input, out=first, stdout=StringIO())
        call_command("ingest", dataset="d2", input=first, out=second, stdout=StringIO())
        self.assertEqual(first.read_text(), second.read_text())

    def test_missing_file_is_data_error(self):
        with self.assertRaises(CommandError) as ctx:
            call_command(
                "ingest",
                dataset="d2",
                input=self.dir / "absent.csv",
                out=self.dir / "x.csv",
                stdout=StringIO(),
            )
        self.assertEqual(ctx.exception.returncode, 2)

    def test_wrong_schema_is_data_error(self):
        with self.assertRaises(CommandError) as ctx:
            call_command(
                "ingest",
                dataset="d3",
                input=self.input,
                out=self.dir / "x.csv",
                stdout=StringIO(),
            )
        self.assertEqual(ctx.exception.returncode, 2)

    def test_unknown_dataset_is_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            call_command(
                "ingest",
                dataset="d9",
                input=self.input,
                out=self.dir / "x.csv",
                stdout=StringIO(),
            )
        self.assertEqual(ctx.exception.returncode, 1)


class SynthCommandTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def test_500_rows_deterministic(self):
        first = self.dir / "a.csv"
        second = self.dir / "b.csv"
        call_command("synth", schema="d2", rows=500, seed=1, out=first, stdout=StringIO())
        call_command("synth", schema="d2", rows=500, seed=1, out=second, stdout=StringIO())
        self.assertEqual(first.read_bytes(), second.read_bytes())
        self.assertEqual(len(first.read_text().splitlines()), 501)

    def test_output_matches_generator(self):
        target = self.dir / "d3.csv"
        call_command("synth", schema="d3", rows=50, seed=4, out=target, stdout=StringIO())
        expected = SyntheticMatrixFactory(descriptor=DATASET3, n_rows=50, seed=4)
        written = load_csv(target, DATASET3)
        np.testing.assert_array_equal(written.values, expected.values)

    def test_one_row_is_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            call_command(
                "synth", schema="d2", rows=1, out=self.dir / "x.csv", stdout=StringIO()
            )
        self.assertEqual(ctx.exception.returncode, 1)

    def test_separation_out_of_range_is_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            call_command(
                "synth",
                schema="d2",
                rows=10,
                separation=2.0,
                out=self.dir / "x.csv",
                stdout=StringIO(),
            )
        self.assertEqual(ctx.exception.returncode, 1)
