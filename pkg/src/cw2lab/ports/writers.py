from __future__ import annotations

from typing import Protocol, TextIO

from cw2lab.application.schemas import ExperimentReport


class ReportWriter(Protocol):
    format_name: str

    def write(self, report: ExperimentReport, stream: TextIO) -> None: ...
