from __future__ import annotations

import json
from typing import TextIO

from cw2lab.application.schemas import ExperimentReport


class JsonReportWriter:
    """One object with config, rows and checks."""

    format_name = "json"

    def write(self, report: ExperimentReport, stream: TextIO) -> None:
        payload = report.model_dump(mode="json")
        stream.write(json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=False))
        stream.write("\n")
