"""
Table reporter.
Writes reproduction targets, prior curves and single results as CSV or JSON.
"""

import io
import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, TextIO

import pandas as pd
from rich.console import Console
from rich.table import Table

from ..core import PathLike
from ..core.config import OutputConfig
from ..core.exceptions import ReportError
from ..core.logger import get_logger

logger = get_logger(__name__)


@dataclass
class TableReport:
    """One computed table with the context needed to audit it."""

    target: str
    frame: pd.DataFrame
    duration: float = 0.0
    timestamp: str = field(default_factory=lambda: datetime.now().isoformat())
    notes: Dict[str, Any] = field(default_factory=dict)


class TableReporter:
    """Reporter for tables, curves and Bayes factor results"""

    def __init__(self, config: Optional[OutputConfig] = None):
        """Initialize reporter with output settings

        Args:
            config: Output configuration
        """
        self.config = config or OutputConfig()
        self.console = Console(stderr=True)

    @property
    def float_format(self) -> str:
        return f"%.{self.config.significant_digits}g"

    def to_csv(self, frame: pd.DataFrame) -> str:
        """Render a frame as comma-separated text with a header row and LF endings."""
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, float_format=self.float_format, lineterminator="\n")
        return buffer.getvalue()

    def to_json(self, data: Dict[str, Any]) -> str:
        return json.dumps(data, indent=2, allow_nan=False) + "\n"

    def write_csv(self, frame: pd.DataFrame, out: Optional[PathLike] = None) -> str:
        """Render ``frame`` and write it to ``out`` when given

        Returns:
            The CSV text.

        Raises:
            ReportError: If the file cannot be written
        """
        text = self.to_csv(frame)
        if out is not None:
            self._write(Path(out), text)
        return text

    def write_json(self, data: Dict[str, Any], out: Optional[PathLike] = None) -> str:
        """Render ``data`` as JSON and write it to ``out`` when given

        Raises:
            ReportError: If the data is not serializable or the file cannot be written
        """
        try:
            text = self.to_json(data)
        except (TypeError, ValueError) as e:
            raise ReportError("Result is not JSON serializable", cause=e)
        if out is not None:
            self._write(Path(out), text)
        return text

    def _write(self, path: Path, text: str) -> None:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        except OSError as e:
            raise ReportError(f"Failed to write {path}", cause=e)
        logger.debug(f"Wrote {path}")

    def print_report(self, report: TableReport) -> None:
        """Print a table report to the console (stderr)

        Args:
            report: Table report to print
        """
        self.console.print(f"\n[bold cyan]{report.target}[/bold cyan] ({report.duration:.2f}s)")

        table = Table(show_header=True)
        for column in report.frame.columns:
            table.add_column(str(column), style="green" if str(column).startswith("B12") else "cyan")
        for row in report.frame.itertuples(index=False):
            table.add_row(*(self._cell(v) for v in row))
        self.console.print(table)

        for key, value in report.notes.items():
            self.console.print(f"  [yellow]{key}[/yellow]: {value}")

    @staticmethod
    def _cell(value: Any) -> str:
        if isinstance(value, float):
            return f"{value:.4g}"
        return str(value)

    @staticmethod
    def payload(report: TableReport) -> Dict[str, Any]:
        """JSON mapping of a report: rows plus the audit context."""
        return {
            "target": report.target,
            "timestamp": report.timestamp,
            "duration": report.duration,
            "notes": report.notes,
            "rows": report.frame.to_dict(orient="records"),
        }

    def save_report(self, report: TableReport, output_path: PathLike) -> None:
        """Save report to file

        ``.json`` stores rows and notes, ``.csv`` the table alone and any other
        suffix a plain-text rendering.

        Args:
            report: Table report to save
            output_path: Path to save report to

        Raises:
            ReportError: If report cannot be saved
        """
        path = Path(output_path)
        if path.suffix == ".json":
            self.write_json(self.payload(report), path)
        elif path.suffix == ".csv":
            self.write_csv(report.frame, path)
        else:
            buffer = io.StringIO()
            self._write_text_report(report, buffer)
            self._write(path, buffer.getvalue())

    def _write_text_report(self, report: TableReport, file: TextIO) -> None:
        title = f"{report.target}"
        file.write(f"{title}\n{'=' * len(title)}\n\n")
        file.write(f"Generated: {report.timestamp}\n")
        file.write(f"Duration: {report.duration:.2f}s\n\n")
        file.write(report.frame.to_string(index=False, float_format=lambda v: self.float_format % v))
        file.write("\n")
        if report.notes:
            file.write("\nNotes\n-----\n")
            for key, value in report.notes.items():
                file.write(f"{key}: {value}\n")
