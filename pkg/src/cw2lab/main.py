from __future__ import annotations

import logging
import sys
from collections.abc import Sequence

from pydantic import ValidationError

from cw2lab.adapters.output import writer_for
from cw2lab.application.schemas import ErrorRecord, ExperimentReport
from cw2lab.cli.arguments import build_parser
from cw2lab.cli.dependencies import get_experiment_config, get_experiment_service
from cw2lab.domain.errors import Cw2LabError
from cw2lab.logging_config import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_ERROR = 2


def _emit_error(record: ErrorRecord) -> None:
    sys.stderr.write(record.model_dump_json() + "\n")


def _write_report(report: ExperimentReport) -> None:
    writer = writer_for(report.config.format)
    output = report.config.output
    if output is None:
        writer.write(report, sys.stdout)
        sys.stdout.flush()
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    with output.open("w", encoding="utf-8", newline="") as stream:
        writer.write(report, stream)
    logger.info("cli.output.written path=%s format=%s", output, report.config.format)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        configure_logging(args.log_level)
        logger.info("cli.command.start command=%s", args.command)
        cfg = get_experiment_config(args)
        report = get_experiment_service().run(cfg)
        _write_report(report)
    except ValidationError as exc:
        logger.warning("cli.error code=invalid_config errors=%s", exc.error_count())
        _emit_error(ErrorRecord(code="invalid_config", message=str(exc)))
        return EXIT_ERROR
    except Cw2LabError as exc:
        logger.warning("cli.error code=%s detail=%s", exc.code, exc)
        _emit_error(ErrorRecord(code=exc.code, message=str(exc)))
        return EXIT_ERROR
    except OSError as exc:
        logger.warning("cli.error code=io_error detail=%s", exc)
        _emit_error(ErrorRecord(code="io_error", message=str(exc)))
        return EXIT_ERROR

    if not report.passed:
        failed = report.failed_checks
        for check in failed:
            logger.warning("cli.check.failed name=%s detail=%s", check.name, check.detail)
        _emit_error(
            ErrorRecord(
                code="checks_failed",
                message=f"{len(failed)} of {len(report.checks)} checks failed",
                failed_checks=failed,
            )
        )
        return EXIT_CHECKS_FAILED

    logger.info("cli.command.done command=%s rows=%s", cfg.command, len(report.rows))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
