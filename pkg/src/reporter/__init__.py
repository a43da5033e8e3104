"""
Reporter module.
Writes tables and results as CSV, JSON or console tables.
"""

from .reporter import TableReport, TableReporter

__all__ = ["TableReporter", "TableReport"]
