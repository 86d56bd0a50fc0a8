"""Report writers keyed by output format."""

from cw2lab.adapters.output.csv_writer import CsvReportWriter
from cw2lab.adapters.output.json_writer import JsonReportWriter
from cw2lab.ports.writers import ReportWriter

WRITERS: dict[str, type[ReportWriter]] = {
    CsvReportWriter.format_name: CsvReportWriter,
    JsonReportWriter.format_name: JsonReportWriter,
}


def writer_for(format_name: str) -> ReportWriter:
    return WRITERS[format_name]()


__all__ = ["CsvReportWriter", "JsonReportWriter", "WRITERS", "writer_for"]
