from __future__ import annotations

import logging
import sys

from cw2lab.config import log_level
from cw2lab.domain.errors import ConfigError


def configure_logging(level: str | None = None) -> None:
    resolved = (level or log_level()).upper()
    if not isinstance(logging.getLevelName(resolved), int):
        raise ConfigError(f"unknown log level {resolved!r}")
    # stdout is reserved for report tables written with --output -
    logging.basicConfig(
        level=resolved,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.StreamHandler(sys.stderr),
        ],
        force=True,
    )
