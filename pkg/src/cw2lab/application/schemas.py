from __future__ import annotations

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from cw2lab.domain.models import MAX_EXPONENT

CommandName = Literal["lln", "clt", "sublinear", "critical", "moments", "solve-m", "comb-check", "sample"]
OutputFormat = Literal["csv", "json"]

DEFAULT_SCHEDULE = [500, 1000, 2000, 4000]
DEFAULT_BETAS = [0.5, 1.0, 1.5, 2.0]


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: CommandName
    n_schedule: list[int] = Field(default_factory=lambda: list(DEFAULT_SCHEDULE), min_length=1)
    alpha1: float = Field(default=0.5, ge=0.0, le=1.0)
    alpha2: float = Field(default=0.5, ge=0.0, le=1.0)
    beta: float = Field(default=0.5, ge=0.0)
    k_max: int = Field(default=6, ge=0, le=MAX_EXPONENT)
    l_max: int = Field(default=6, ge=0, le=MAX_EXPONENT)
    seed: int = Field(default=42, ge=0, le=2**64 - 1)
    output: Path | None = None
    format: OutputFormat = "csv"
    epsilon: float = Field(default=0.05, gt=0.0)
    betas: list[float] = Field(default_factory=lambda: list(DEFAULT_BETAS), min_length=1)
    n_draws: int = Field(default=100_000, ge=1)
    sweeps: int = Field(default=11_000, ge=1)
    burn_in: int = Field(default=1_000, ge=0)
    thin: int = Field(default=10, ge=1)

    @field_validator("n_schedule")
    @classmethod
    def validate_schedule(cls, value: list[int]) -> list[int]:
        if any(n < 1 for n in value):
            raise ValueError("n_schedule entries must be positive")
        if any(later <= earlier for earlier, later in zip(value, value[1:])):
            raise ValueError("n_schedule must be strictly increasing")
        return value

    @field_validator("betas")
    @classmethod
    def validate_betas(cls, value: list[float]) -> list[float]:
        if any(b < 0 for b in value):
            raise ValueError("betas must be nonnegative")
        return value

    @model_validator(mode="after")
    def validate_fractions(self) -> "ExperimentConfig":
        if self.alpha1 + self.alpha2 > 1.0 + 1e-12:
            raise ValueError("alpha1 + alpha2 must not exceed 1")
        if self.burn_in >= self.sweeps:
            raise ValueError("burn_in must be smaller than sweeps")
        return self


class CltRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_total: int
    n1: int
    n2: int
    k: int
    l: int
    exact_moment: float
    closed_form: float
    isserlis: float
    abs_err: float


class LlnRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_total: int
    n1: int
    n2: int
    m: float
    aligned_mass: float
    anti_aligned_mass: float | None = None


class SublinearRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_total: int
    n1: int
    n2: int
    var1: float
    cov: float
    var2: float
    target_var1: float
    target_cov: float
    target_var2: float


class CriticalRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_total: int
    n1: int
    n2: int
    k: int
    l: int
    exact_moment: float
    critical_moment: float
    abs_err: float


class MomentsRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    k: int
    l: int
    closed_form: float
    isserlis: float
    isserlis_brute: float | None = None
    rel_err: float


class SolveMRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    beta: float
    m: float
    residual: float


class CombCheckRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    l_total: int
    n: int
    profiles: int
    partition_number: int
    profile_sum: int
    n_power: int
    status: Literal["OK", "FAIL"]


class SampleRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_total: int
    n1: int
    n2: int
    sampler: Literal["exact", "glauber"]
    k: int
    l: int
    estimate: float
    std_error: float
    exact: float
    z_score: float | None = None


ReportRow = CltRow | LlnRow | SublinearRow | CriticalRow | MomentsRow | SolveMRow | CombCheckRow | SampleRow


class CheckResult(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    passed: bool
    detail: str = ""


class ExperimentReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: ExperimentConfig
    rows: list[ReportRow]
    checks: list[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed_checks(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]


class ErrorRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    code: str
    message: str
    failed_checks: list[CheckResult] = Field(default_factory=list)

