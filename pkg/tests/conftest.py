from __future__ import annotations

import pytest

from cw2lab.application.schemas import ExperimentConfig
from cw2lab.application.services import ExperimentService
from cw2lab.domain.models import ModelParams


@pytest.fixture
def small_params() -> ModelParams:
    return ModelParams(n_total=12, n1=4, n2=4, beta=1.2)


@pytest.fixture
def service() -> ExperimentService:
    return ExperimentService(workers=1)


@pytest.fixture
def make_config():
    def _make(command: str, **overrides) -> ExperimentConfig:
        return ExperimentConfig(command=command, **overrides)

    return _make
