from __future__ import annotations

import csv
from typing import Any, TextIO

from cw2lab.application.schemas import ExperimentReport


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


class CsvReportWriter:
    """Header plus one line per row; reals with 17 significant digits."""

    format_name = "csv"

    def write(self, report: ExperimentReport, stream: TextIO) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        if not report.rows:
            return
        columns = list(type(report.rows[0]).model_fields)
        writer.writerow(columns)
        for row in report.rows:
            writer.writerow([format_cell(getattr(row, column)) for column in columns])
