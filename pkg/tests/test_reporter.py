"""
Tests for the table reporter.
"""

import json
import math
import tempfile
import unittest
from pathlib import Path

import pandas as pd

from src.core.config import OutputConfig
from src.core.exceptions import ReportError
from src.reporter import TableReport, TableReporter


class TestTableReporter(unittest.TestCase):
    """Test cases for CSV, JSON and text output"""

    def setUp(self):
        self.reporter = TableReporter()
        self.report = TableReport(
            target="table_check",
            frame=pd.DataFrame({"n": [10, 100], "B12_S": [1.0 / 3.0, 9.7412345678912]}),
            duration=0.5,
            notes={"mu0": 5.0},
        )

    def test_csv_format(self):
        """Test LF endings and ten significant digits"""
        text = self.reporter.to_csv(self.report.frame)
        self.assertNotIn("\r", text)
        self.assertEqual(text.splitlines(), ["n,B12_S", "10,0.3333333333", "100,9.741234568"])

    def test_significant_digits(self):
        """Test that the digits follow the output settings"""
        reporter = TableReporter(OutputConfig(significant_digits=4))
        self.assertIn("0.3333\n", reporter.to_csv(self.report.frame))

    def test_json_rejects_nan(self):
        """Test that NaN is not written as JSON"""
        with self.assertRaises(ReportError):
            self.reporter.write_json({"bf12": math.nan})

    def test_payload(self):
        """Test the JSON mapping of a report"""
        payload = self.reporter.payload(self.report)
        self.assertEqual(payload["target"], "table_check")
        self.assertEqual(payload["rows"][0], {"n": 10, "B12_S": 1.0 / 3.0})

    def test_save_report(self):
        """Test saving by file suffix"""
        with tempfile.TemporaryDirectory() as tmp:
            base = Path(tmp) / "nested"
            self.reporter.save_report(self.report, base / "out.json")
            self.reporter.save_report(self.report, base / "out.csv")
            self.reporter.save_report(self.report, base / "out.txt")

            data = json.loads((base / "out.json").read_text(encoding="utf-8"))
            self.assertEqual(data["notes"], {"mu0": 5.0})
            self.assertTrue((base / "out.csv").read_text(encoding="utf-8").startswith("n,B12_S\n"))
            text = (base / "out.txt").read_text(encoding="utf-8")
            self.assertTrue(text.startswith("table_check\n==========="))
            self.assertIn("mu0: 5.0", text)

    def test_unwritable(self):
        """Test that a write failure is a ReportError"""
        with tempfile.TemporaryDirectory() as tmp:
            blocker = Path(tmp) / "file"
            blocker.write_text("", encoding="utf-8")
            with self.assertRaises(ReportError):
                self.reporter.write_csv(self.report.frame, blocker / "out.csv")


if __name__ == "__main__":
    unittest.main()
