from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats

from cw2lab.domain.errors import CapacityError, DomainError
from cw2lab.domain.models import ModelParams, MomentQuery, Scaling
from cw2lab.engine import exact, limits


def _oracle_cases() -> list[tuple[int, int, int]]:
    cases = []
    for n in range(2, 15):
        for n1 in range(1, n):
            cases.extend((n, n1, n2) for n2 in range(1, n - n1 + 1))
    return cases


@pytest.mark.parametrize("beta", [0.0, 0.5, 1.0, 1.5])
def test_exact_distribution_matches_brute_force(beta: float) -> None:
    for n, n1, n2 in _oracle_cases():
        params = ModelParams(n_total=n, n1=n1, n2=n2, beta=beta)
        fast = exact.exact_pair_distribution(params)
        brute = exact.brute_force_pair_distribution(params)
        np.testing.assert_allclose(fast.probabilities(), brute.probabilities(), rtol=0, atol=1e-12)
        assert fast.log_z == pytest.approx(brute.log_z, abs=1e-10)


def test_brute_force_agrees_on_twelve_spin_example(small_params: ModelParams) -> None:
    fast = exact.exact_pair_distribution(small_params)
    brute = exact.brute_force_pair_distribution(small_params)
    np.testing.assert_allclose(fast.log_prob, brute.log_prob, atol=1e-12)


def test_log_boltzmann_weight_values() -> None:
    params = ModelParams(n_total=4, n1=2, n2=2, beta=1.0)
    assert exact.log_boltzmann_weight(params, 4) == pytest.approx(2.0)
    assert exact.log_boltzmann_weight(params, 0) == 0.0
    assert exact.log_boltzmann_weight(params, -2) == pytest.approx(0.5)


@pytest.mark.parametrize("s_total", [3, 6, -5])
def test_log_boltzmann_weight_rejects_unreachable_magnetization(s_total: int) -> None:
    params = ModelParams(n_total=4, n1=2, n2=2, beta=1.0)
    with pytest.raises(DomainError):
        exact.log_boltzmann_weight(params, s_total)


def test_two_spin_partition_function() -> None:
    params = ModelParams(n_total=2, n1=1, n2=1, beta=1.0)
    dist = exact.exact_pair_distribution(params)
    assert dist.log_z == pytest.approx(math.log(2 * math.e + 2), abs=1e-14)
    assert exact.log_partition(params) == pytest.approx(dist.log_z, abs=1e-14)


def test_distribution_is_normalized_and_symmetric() -> None:
    params = ModelParams(n_total=301, n1=100, n2=120, beta=0.9)
    dist = exact.exact_pair_distribution(params)
    probs = dist.probabilities()
    assert probs.sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(dist.log_prob, dist.log_prob[::-1, ::-1], atol=1e-12)
    assert dist.marginal(0).shape == (101,)
    assert dist.marginal(1).sum() == pytest.approx(1.0, abs=1e-12)


def test_beta_zero_factorizes_into_binomials() -> None:
    params = ModelParams(n_total=10, n1=3, n2=4, beta=0.0)
    dist = exact.exact_pair_distribution(params)
    p1 = stats.binom.pmf(np.arange(4), 3, 0.5)
    p2 = stats.binom.pmf(np.arange(5), 4, 0.5)
    np.testing.assert_allclose(dist.probabilities(), np.outer(p1, p2), atol=1e-15)


def test_table_budget_is_enforced() -> None:
    params = ModelParams(n_total=8, n1=4, n2=4, beta=0.5)
    with pytest.raises(CapacityError):
        exact.exact_pair_distribution(params, max_entries=10)


def test_brute_force_refuses_large_systems() -> None:
    with pytest.raises(CapacityError):
        exact.brute_force_pair_distribution(ModelParams(n_total=25, n1=5, n2=5, beta=0.5))


def test_g_table_does_not_depend_on_worker_count() -> None:
    params = ModelParams(n_total=3000, n1=1200, n2=900, beta=0.7)
    serial = exact.log_g_table(params, workers=1)
    threaded = exact.log_g_table(params, workers=4)
    np.testing.assert_array_equal(serial, threaded)
    np.testing.assert_array_equal(serial, serial[::-1])


def test_mixed_moment_parity_and_order_zero(small_params: ModelParams) -> None:
    dist = exact.exact_pair_distribution(small_params)
    assert exact.mixed_moment_exact(dist, MomentQuery(2, 1)) == 0.0
    assert exact.mixed_moment_exact(dist, MomentQuery(0, 3)) == 0.0
    assert exact.mixed_moment_exact(dist, MomentQuery(0, 0)) == 1.0


def test_moment_table_matches_single_moments() -> None:
    params = ModelParams(n_total=200, n1=60, n2=80, beta=0.6)
    dist = exact.exact_pair_distribution(params)
    table = exact.mixed_moment_table(dist, 4, 4, Scaling.SQRT_SPIN)
    for k, l in [(2, 0), (1, 1), (3, 1), (2, 2), (0, 4), (1, 2)]:
        assert table[k, l] == pytest.approx(exact.mixed_moment_exact(dist, MomentQuery(k, l)), rel=1e-12, abs=1e-15)


def test_total_distribution_second_moment_matches_pair_correlation() -> None:
    params = ModelParams(n_total=20, n1=5, n2=5, beta=0.5)
    s, log_p = exact.exact_total_distribution(params)
    second = float(np.exp(log_p) @ (s * s))
    n = params.n_total
    assert exact.spin_correlation_exact(params, 2) == pytest.approx((second - n) / (n * (n - 1)), rel=1e-10)


def test_spin_correlation_edge_cases() -> None:
    params = ModelParams(n_total=30, n1=10, n2=10, beta=0.0)
    assert exact.spin_correlation_exact(params, 0) == pytest.approx(1.0)
    assert exact.spin_correlation_exact(params, 3) == 0.0
    assert exact.spin_correlation_exact(params, 4) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DomainError):
        exact.spin_correlation_exact(params, 31)


def test_spin_correlation_approaches_leading_term() -> None:
    params = ModelParams(n_total=2000, n1=1000, n2=1000, beta=0.5)
    value = exact.spin_correlation_exact(params, 2)
    assert value == pytest.approx(limits.correlation_asymptotic(2, 0.5, 2000), rel=0.05)


def test_group_sizes() -> None:
    assert exact.group_sizes(4000, 0.5, 0.5) == (2000, 2000)
    assert exact.group_sizes(1001, 0.5, 0.25) == (500, 250)
    assert exact.group_sizes(4000, 0.0, 0.5, sublinear=True) == (63, 2000)
    with pytest.raises(DomainError):
        exact.group_sizes(10, 0.05, 0.5)


def test_clt_moments_at_four_thousand_spins() -> None:
    params = ModelParams(n_total=4000, n1=2000, n2=2000, beta=0.5)
    dist = exact.exact_pair_distribution(params)
    table = exact.mixed_moment_table(dist, 4, 4, Scaling.SQRT_SPIN)
    assert table[2, 0] == pytest.approx(1.5, rel=0.02)
    assert table[1, 1] == pytest.approx(0.5, rel=0.02)
    assert table[0, 2] == pytest.approx(1.5, rel=0.02)
    assert table[4, 0] == pytest.approx(limits.isserlis_moment(4, 0, 1.5, 0.5, 1.5), rel=0.05)
    assert table[2, 2] == pytest.approx(limits.isserlis_moment(2, 2, 1.5, 0.5, 1.5), rel=0.05)


def test_lln_mass_concentrates_on_aligned_atoms() -> None:
    m = limits.solve_m(1.5)
    aligned = [(m, m), (-m, -m)]
    anti_aligned = [(m, -m), (-m, m)]
    masses = []
    for n in (2000, 4000):
        dist = exact.exact_pair_distribution(ModelParams(n_total=n, n1=n // 2, n2=n // 2, beta=1.5))
        masses.append(dist.mass_within(aligned, 0.05))
        assert dist.mass_within(anti_aligned, 0.05) <= 1e-3
    assert masses[0] >= 0.97
    assert masses[1] >= 0.99
    assert masses[1] >= masses[0]


def test_sublinear_group_variance_and_covariance() -> None:
    n = 4000
    n1, n2 = exact.group_sizes(n, 0.0, 0.5, sublinear=True)
    params = ModelParams(n_total=n, n1=n1, n2=n2, beta=0.5)
    dist = exact.exact_pair_distribution(params)
    table = exact.mixed_moment_table(dist, 2, 2, Scaling.SQRT_SPIN)
    corr = exact.spin_correlation_exact(params, 2)

    assert 0.95 <= table[2, 0] <= 1.05
    assert table[0, 2] == pytest.approx(1.5, rel=0.05)
    # exchangeability: Cov(S1, S2) / sqrt(N1 N2) = sqrt(N1 N2) E(X_1 X_2)
    assert table[1, 1] == pytest.approx(math.sqrt(n1 * n2) * corr, rel=1e-8)
    assert table[2, 0] == pytest.approx(1 + (n1 - 1) * corr, rel=1e-8)
    assert abs(table[1, 1]) < 0.1


@pytest.mark.parametrize("beta", [0.5, 1.0, 1.5])
def test_two_spin_aligned_probability(beta: float) -> None:
    dist = exact.exact_pair_distribution(ModelParams(n_total=2, n1=1, n2=1, beta=beta))
    expected = math.exp(beta) / (2 * math.exp(beta) + 2)
    assert dist.probabilities()[1, 1] == pytest.approx(expected, rel=1e-14)
    assert dist.probabilities()[0, 0] == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize(("n", "k", "beta"), [(9, 4, 0.7), (40, 15, 1.3), (400, 100, 0.5)])
def test_equal_groups_are_exchangeable(n: int, k: int, beta: float) -> None:
    dist = exact.exact_pair_distribution(ModelParams(n_total=n, n1=k, n2=k, beta=beta))
    np.testing.assert_allclose(dist.log_prob, dist.log_prob.T, atol=1e-12)


@pytest.mark.parametrize(("n", "n1", "n2"), [(6, 2, 3), (30, 10, 5), (200, 50, 50)])
def test_coupling_raises_all_up_probability(n: int, n1: int, n2: int) -> None:
    free = exact.exact_pair_distribution(ModelParams(n_total=n, n1=n1, n2=n2, beta=0.0))
    coupled = exact.exact_pair_distribution(ModelParams(n_total=n, n1=n1, n2=n2, beta=1.0))
    assert coupled.probabilities()[-1, -1] > free.probabilities()[-1, -1]
    assert coupled.probabilities()[0, 0] > free.probabilities()[0, 0]


def test_package_exports_log_partition() -> None:
    import cw2lab

    params = ModelParams(n_total=20, n1=5, n2=6, beta=0.9)
    assert "log_partition" in cw2lab.__all__
    assert cw2lab.log_partition(params) == pytest.approx(exact.exact_pair_distribution(params).log_z, abs=1e-12)
