"""Exact finite-N engine and limit laws for the two-group Curie-Weiss model."""

from cw2lab.domain.errors import CapacityError, ConfigError, Cw2LabError, DomainError
from cw2lab.domain.models import (
    ChainConfig,
    GaussianLimit,
    LlnLimit,
    ModelParams,
    MomentQuery,
    MultiIndex,
    PairDistribution,
    ProfileClass,
    ProfileVector,
    SampleBatch,
    Scaling,
)
from cw2lab.engine.combinatorics import (
    classify_profile,
    enumerate_profiles,
    odd_multiplicity_count,
    profile_of,
    w_count,
)
from cw2lab.engine.exact import (
    brute_force_pair_distribution,
    exact_pair_distribution,
    exact_total_distribution,
    log_boltzmann_weight,
    log_partition,
    mixed_moment_exact,
    spin_correlation_exact,
)
from cw2lab.engine.limits import (
    closed_form_moment,
    correlation_asymptotic,
    critical_moment,
    gaussian_cov,
    isserlis_brute,
    isserlis_moment,
    lln_limit,
    solve_m,
)
from cw2lab.engine.sampling import empirical_moments, glauber_chain, sample_exact

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ChainConfig",
    "ConfigError",
    "Cw2LabError",
    "DomainError",
    "GaussianLimit",
    "LlnLimit",
    "ModelParams",
    "MomentQuery",
    "MultiIndex",
    "PairDistribution",
    "ProfileClass",
    "ProfileVector",
    "SampleBatch",
    "Scaling",
    "brute_force_pair_distribution",
    "classify_profile",
    "closed_form_moment",
    "correlation_asymptotic",
    "critical_moment",
    "empirical_moments",
    "enumerate_profiles",
    "exact_pair_distribution",
    "exact_total_distribution",
    "gaussian_cov",
    "glauber_chain",
    "isserlis_brute",
    "isserlis_moment",
    "lln_limit",
    "log_boltzmann_weight",
    "log_partition",
    "mixed_moment_exact",
    "odd_multiplicity_count",
    "profile_of",
    "sample_exact",
    "solve_m",
    "spin_correlation_exact",
    "w_count",
]
