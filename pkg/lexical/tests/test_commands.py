import tempfile
from io import StringIO
from pathlib import Path

import pandas as pd
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from websites.descriptors import DATASET1, DATASET2


class ExtractCommandTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)
        self.out = self.dir / "features.csv"

    def extract(self, **options):
        stdout, stderr = StringIO(), StringIO()
        call_command("extract", out=self.out, stdout=stdout, stderr=stderr, **options)
        return stdout.getvalue(), stderr.getvalue()

    def test_single_url(self):
        output, _ = self.extract(url="http://192.168.1.1/login", schema="d2")
        frame = pd.read_csv(self.out)
        self.assertEqual(list(frame.columns), list(DATASET2.feature_names))
        self.assertEqual(len(frame), 1)
        self.assertEqual(frame.loc[0, "having_IP_Address"], -1)
        self.assertIn("1 rows written", output)
        self.assertIn("9 of 30 Dataset 2 features", output)

    def test_dataset_1_schema(self):
        self.extract(url="http://example.com/a_b_c", schema="d1")
        frame = pd.read_csv(self.out)
        self.assertEqual(frame.shape, (1, DATASET1.feature_count))
        self.assertEqual(frame.loc[0, "NumUnderscore"], 2)

    def test_file_with_a_malformed_line(self):
        source = self.dir / "urls.txt"
        source.write_text("http://example.com/\nnot a url\nhttps://secure-login.example/~u\n")
        output, errors = self.extract(file=source)
        self.assertEqual(len(pd.read_csv(self.out)), 2)
        self.assertEqual(len(errors.strip().splitlines()), 1)
        self.assertIn("line 2", errors)
        self.assertIn("1 malformed lines skipped", output)

    def test_malformed_url_is_data_error(self):
        with self.assertRaises(CommandError) as ctx:
            self.extract(url="not a url")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_file_without_any_valid_url(self):
        source = self.dir / "urls.txt"
        source.write_text("not a url\n\n")
        with self.assertRaises(CommandError) as ctx:
            self.extract(file=source)
        self.assertEqual(ctx.exception.returncode, 2)

    def test_missing_file(self):
        with self.assertRaises(CommandError) as ctx:
            self.extract(file=self.dir / "absent.txt")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_url_or_file_is_required(self):
        with self.assertRaises(CommandError) as ctx:
            self.extract(schema="d2")
        self.assertEqual(ctx.exception.returncode, 1)

    def test_unknown_schema(self):
        with self.assertRaises(CommandError) as ctx:
            call_command(
                "extract", "--url", "http://example.com/", "--schema", "d3", stdout=StringIO()
            )
        self.assertEqual(ctx.exception.returncode, 1)
