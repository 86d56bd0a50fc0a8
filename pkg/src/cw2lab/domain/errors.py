from __future__ import annotations


class Cw2LabError(Exception):
    code = "error"


class DomainError(Cw2LabError, ValueError):
    """A precondition of a model or limit-law operation does not hold."""

    code = "domain_error"


class CapacityError(Cw2LabError):
    """The requested table or enumeration exceeds its size guard."""

    code = "capacity_error"


class ConfigError(Cw2LabError):
    """An environment value, log level or config file cannot be used."""

    code = "invalid_config"
