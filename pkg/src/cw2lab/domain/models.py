from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from cw2lab.domain.errors import DomainError

COMMAND_LLN = "lln"
COMMAND_CLT = "clt"
COMMAND_SUBLINEAR = "sublinear"
COMMAND_CRITICAL = "critical"
COMMAND_MOMENTS = "moments"
COMMAND_SOLVE_M = "solve-m"
COMMAND_COMB_CHECK = "comb-check"
COMMAND_SAMPLE = "sample"
COMMANDS = (
    COMMAND_LLN,
    COMMAND_CLT,
    COMMAND_SUBLINEAR,
    COMMAND_CRITICAL,
    COMMAND_MOMENTS,
    COMMAND_SOLVE_M,
    COMMAND_COMB_CHECK,
    COMMAND_SAMPLE,
)

MAX_EXPONENT = 12


class Scaling(str, Enum):
    """Normalisation N_i^gamma applied to each group sum."""

    PER_SPIN = "per_spin"
    SQRT_SPIN = "sqrt_spin"
    CRITICAL = "critical"

    @property
    def exponent(self) -> float:
        return _SCALING_EXPONENTS[self]


_SCALING_EXPONENTS = {
    Scaling.PER_SPIN: 1.0,
    Scaling.SQRT_SPIN: 0.5,
    Scaling.CRITICAL: 0.75,
}


@dataclass(slots=True, frozen=True)
class ModelParams:
    n_total: int
    n1: int
    n2: int
    beta: float

    def __post_init__(self) -> None:
        if self.n_total < 1:
            raise DomainError(f"n_total must be positive, got {self.n_total}")
        if self.n1 < 1 or self.n2 < 1:
            raise DomainError(f"group sizes must be positive, got n1={self.n1} n2={self.n2}")
        if self.n1 + self.n2 > self.n_total:
            raise DomainError(
                f"groups do not fit: n1+n2={self.n1 + self.n2} exceeds n_total={self.n_total}"
            )
        if not math.isfinite(self.beta) or self.beta < 0:
            raise DomainError(f"beta must be finite and nonnegative, got {self.beta}")

    @property
    def n_rest(self) -> int:
        return self.n_total - self.n1 - self.n2

    @property
    def alpha1(self) -> float:
        return self.n1 / self.n_total

    @property
    def alpha2(self) -> float:
        return self.n2 / self.n_total


@dataclass(slots=True, frozen=True)
class PairDistribution:
    """Joint law of (S1, S2); log_prob[i, j] belongs to (support1[i], support2[j])."""

    params: ModelParams
    support1: np.ndarray
    support2: np.ndarray
    log_prob: np.ndarray
    log_z: float

    def probabilities(self) -> np.ndarray:
        return np.exp(self.log_prob)

    def marginal(self, axis: int) -> np.ndarray:
        """Law of S1 (axis=0) or S2 (axis=1) on the matching support."""
        if axis not in (0, 1):
            raise DomainError(f"axis must be 0 or 1, got {axis}")
        return self.probabilities().sum(axis=1 - axis)

    def mass_within(self, centers: Sequence[tuple[float, float]], radius: float) -> float:
        """Probability that (S1/N1, S2/N2) lies in the union of closed sup-norm balls."""
        x = self.support1 / self.params.n1
        y = self.support2 / self.params.n2
        slack = 1e-12
        mask = np.zeros(self.log_prob.shape, dtype=bool)
        for cx, cy in centers:
            mask |= np.outer(np.abs(x - cx) <= radius + slack, np.abs(y - cy) <= radius + slack)
        return float(self.probabilities()[mask].sum())


@dataclass(slots=True, frozen=True)
class MomentQuery:
    k_exp: int
    l_exp: int
    scaling: Scaling = Scaling.SQRT_SPIN

    def __post_init__(self) -> None:
        if self.k_exp < 0 or self.l_exp < 0:
            raise DomainError(f"exponents must be nonnegative, got K={self.k_exp} L={self.l_exp}")

    @property
    def gamma(self) -> float:
        return self.scaling.exponent

    @property
    def order(self) -> int:
        return self.k_exp + self.l_exp


@dataclass(slots=True, frozen=True)
class GaussianLimit:
    c11: float
    c12: float
    c22: float
    alpha1: float
    alpha2: float
    beta_bar: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.c11, self.c12], [self.c12, self.c22]])

    @property
    def determinant(self) -> float:
        return self.c11 * self.c22 - self.c12 * self.c12


@dataclass(slots=True, frozen=True)
class LlnLimit:
    m: float
    atoms: tuple[tuple[tuple[float, float], float], ...]

    @property
    def total_mass(self) -> float:
        return math.fsum(mass for _, mass in self.atoms)


@dataclass(slots=True, frozen=True)
class MultiIndex:
    entries: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if not self.entries:
            raise DomainError("a multiindex needs at least one entry")
        if any(entry < 1 or entry > self.n for entry in self.entries):
            raise DomainError(f"multiindex entries must lie in [1, {self.n}]")

    @property
    def length(self) -> int:
        return len(self.entries)


@dataclass(slots=True, frozen=True)
class ProfileVector:
    """Dense profile (r_1, ..., r_L): r_l distinct indices occur exactly l times."""

    counts: tuple[int, ...]
    l_total: int

    def __post_init__(self) -> None:
        if len(self.counts) != self.l_total:
            raise DomainError(f"profile needs {self.l_total} entries, got {len(self.counts)}")
        if any(r < 0 or r > self.l_total for r in self.counts):
            raise DomainError(f"profile entries must lie in [0, {self.l_total}]")
        weighted = sum(l * r for l, r in enumerate(self.counts, start=1))
        if weighted != self.l_total:
            raise DomainError(f"sum of l*r_l is {weighted}, expected {self.l_total}")

    @classmethod
    def from_sparse(cls, pairs: dict[int, int], l_total: int) -> ProfileVector:
        counts = [0] * l_total
        for l, r in pairs.items():
            if not 1 <= l <= l_total:
                raise DomainError(f"block size {l} outside [1, {l_total}]")
            counts[l - 1] = r
        return cls(counts=tuple(counts), l_total=l_total)

    @property
    def sparse(self) -> tuple[tuple[int, int], ...]:
        return tuple((l, r) for l, r in enumerate(self.counts, start=1) if r > 0)

    @property
    def distinct(self) -> int:
        return sum(self.counts)

    def r(self, l: int) -> int:
        return self.counts[l - 1]


@dataclass(slots=True, frozen=True)
class ProfileClass:
    k: int
    in_pi_k: bool
    in_pi_zero: bool
    in_pi_plus: bool


@dataclass(slots=True, frozen=True)
class ChainConfig:
    sweeps: int
    burn_in: int = 1000
    thin: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sweeps < 1:
            raise DomainError(f"sweeps must be positive, got {self.sweeps}")
        if self.burn_in < 0 or self.burn_in >= self.sweeps:
            raise DomainError(f"burn_in must lie in [0, sweeps), got {self.burn_in}")
        if self.thin < 1:
            raise DomainError(f"thin must be positive, got {self.thin}")


@dataclass(slots=True)
class SampleBatch:
    """Draws of (S1, S2) as an (n, 2) integer array."""

    draws: np.ndarray
    params: ModelParams
    seed: int
    acceptance_rate: float | None = None

    def __len__(self) -> int:
        return int(self.draws.shape[0])
