from __future__ import annotations

import os

from cw2lab.domain.errors import ConfigError

ENV_PREFIX = "CW2LAB_"

DEFAULT_LOG_LEVEL = "INFO"
DEFAULT_MAX_TABLE_ENTRIES = 100_000_000
DEFAULT_WORKERS = 1


class EnvConfig:
    """Typed environment readers; names are looked up with the CW2LAB_ prefix."""

    @staticmethod
    def _key(name: str) -> str:
        return name if name.startswith(ENV_PREFIX) else f"{ENV_PREFIX}{name}"

    @staticmethod
    def str(name: str, default: str) -> str:
        return os.getenv(EnvConfig._key(name), default)

    @staticmethod
    def int(name: str, default: int) -> int:
        key = EnvConfig._key(name)
        raw = os.getenv(key, str(default))
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer, got {raw!r}") from exc


def log_level() -> str:
    return EnvConfig.str("LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()


def max_table_entries() -> int:
    return EnvConfig.int("MAX_TABLE_ENTRIES", DEFAULT_MAX_TABLE_ENTRIES)


def workers() -> int:
    return max(1, EnvConfig.int("WORKERS", DEFAULT_WORKERS))
