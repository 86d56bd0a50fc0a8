from __future__ import annotations

import argparse
import json
from pathlib import Path
from typing import Any

from cw2lab.application.schemas import ExperimentConfig
from cw2lab.application.services import ExperimentService
from cw2lab.domain.errors import ConfigError

NON_CONFIG_ARGS = {"config", "log_level"}


def load_config_file(path: Path) -> dict[str, Any]:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def get_experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    merged: dict[str, Any] = {}
    if args.config is not None:
        merged.update(load_config_file(args.config))
    for name, value in vars(args).items():
        if name in NON_CONFIG_ARGS or value is None:
            continue
        merged[name] = value
    if merged.get("output") == "-":
        merged["output"] = None
    return ExperimentConfig.model_validate(merged)


def get_experiment_service() -> ExperimentService:
    return ExperimentService()
