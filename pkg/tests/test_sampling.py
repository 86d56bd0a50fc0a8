from __future__ import annotations

import numpy as np
import pytest
from scipy import stats

from cw2lab.domain.errors import DomainError
from cw2lab.domain.models import ChainConfig, ModelParams, MomentQuery, SampleBatch, Scaling
from cw2lab.engine import exact, limits, sampling


def test_alias_table_frequencies() -> None:
    probs = np.array([0.1, 0.2, 0.3, 0.4])
    table = sampling.AliasTable(probs)
    draws = table.draw(sampling.make_rng(11), 100_000)
    observed = np.bincount(draws, minlength=4)
    _, p_value = stats.chisquare(observed, probs * draws.size)
    assert p_value > 1e-3


def test_alias_table_uniform_weights() -> None:
    table = sampling.AliasTable(np.ones(7))
    np.testing.assert_allclose(table.prob, 1.0)
    observed = np.bincount(table.draw(sampling.make_rng(3), 70_000), minlength=7)
    _, p_value = stats.chisquare(observed)
    assert p_value > 1e-3


def test_alias_table_never_draws_zero_weight() -> None:
    table = sampling.AliasTable(np.array([0.0, 0.5, 0.0, 0.5]))
    draws = table.draw(sampling.make_rng(5), 10_000)
    assert set(np.unique(draws)) <= {1, 3}


@pytest.mark.parametrize("weights", [np.array([]), np.zeros(3), np.array([0.5, -0.1, 0.6])])
def test_alias_table_rejects_bad_weights(weights: np.ndarray) -> None:
    with pytest.raises(DomainError):
        sampling.AliasTable(weights)


def test_make_rng_seed_range() -> None:
    with pytest.raises(DomainError):
        sampling.make_rng(-1)
    with pytest.raises(DomainError):
        sampling.make_rng(2**64)


def test_exact_sampler_is_reproducible_and_worker_independent() -> None:
    dist = exact.exact_pair_distribution(ModelParams(n_total=40, n1=10, n2=12, beta=0.8))
    n_draws = 2 * sampling.SHARD_SIZE + 17
    first = sampling.sample_exact(dist, n_draws, seed=2024, workers=1)
    second = sampling.sample_exact(dist, n_draws, seed=2024, workers=3)
    other = sampling.sample_exact(dist, n_draws, seed=2025, workers=1)
    np.testing.assert_array_equal(first.draws, second.draws)
    assert not np.array_equal(first.draws, other.draws)
    assert len(first) == n_draws


def test_exact_draws_lie_on_the_support() -> None:
    params = ModelParams(n_total=30, n1=7, n2=8, beta=1.2)
    batch = sampling.sample_exact(exact.exact_pair_distribution(params), 5_000, seed=1)
    s1, s2 = batch.draws[:, 0], batch.draws[:, 1]
    assert np.all(np.abs(s1) <= 7) and np.all((s1 + 7) % 2 == 0)
    assert np.all(np.abs(s2) <= 8) and np.all((s2 + 8) % 2 == 0)


def test_exact_sampler_matches_exact_moments() -> None:
    params = ModelParams(n_total=200, n1=100, n2=100, beta=0.5)
    dist = exact.exact_pair_distribution(params)
    batch = sampling.sample_exact(dist, 50_000, seed=42)
    table = exact.mixed_moment_table(dist, 2, 2, Scaling.SQRT_SPIN)
    for k, l in [(2, 0), (1, 1), (0, 2), (1, 0)]:
        estimate, se = sampling.empirical_moments(batch, MomentQuery(k, l))
        assert abs(estimate - table[k, l]) <= 4 * se


def test_chain_accepts_every_flip_at_infinite_temperature() -> None:
    params = ModelParams(n_total=50, n1=20, n2=20, beta=0.0)
    batch = sampling.glauber_chain(params, ChainConfig(sweeps=200, burn_in=100, thin=10, seed=9))
    assert batch.acceptance_rate == 1.0
    assert len(batch) == 10


def test_chain_tracks_group_sums() -> None:
    params = ModelParams(n_total=60, n1=25, n2=15, beta=1.3)
    batch = sampling.glauber_chain(params, ChainConfig(sweeps=300, burn_in=50, thin=1, seed=4))
    assert len(batch) == 250
    assert np.all((batch.draws[:, 0] + 25) % 2 == 0)
    assert np.all((batch.draws[:, 1] + 15) % 2 == 0)
    assert 0.0 < batch.acceptance_rate < 1.0


def test_chain_is_reproducible() -> None:
    params = ModelParams(n_total=80, n1=30, n2=30, beta=0.6)
    cfg = ChainConfig(sweeps=150, burn_in=20, thin=5, seed=77)
    np.testing.assert_array_equal(
        sampling.glauber_chain(params, cfg).draws,
        sampling.glauber_chain(params, cfg).draws,
    )


def test_chain_matches_exact_second_moments() -> None:
    params = ModelParams(n_total=200, n1=100, n2=100, beta=0.5)
    dist = exact.exact_pair_distribution(params)
    table = exact.mixed_moment_table(dist, 2, 2, Scaling.SQRT_SPIN)
    batch = sampling.glauber_chain(params, ChainConfig(sweeps=6000, burn_in=500, thin=5, seed=13))
    for k, l in [(2, 0), (0, 2)]:
        estimate, se = sampling.empirical_moments(batch, MomentQuery(k, l))
        assert abs(estimate - table[k, l]) <= 4 * se


def test_empirical_moments_hand_example() -> None:
    params = ModelParams(n_total=8, n1=4, n2=4, beta=0.1)
    batch = SampleBatch(draws=np.array([[2, 0], [-2, 0]]), params=params, seed=0)
    estimate, se = sampling.empirical_moments(batch, MomentQuery(1, 0, Scaling.PER_SPIN))
    assert estimate == 0.0
    assert se == pytest.approx(0.5)


def test_chain_config_validation() -> None:
    with pytest.raises(DomainError):
        ChainConfig(sweeps=10, burn_in=10)
    with pytest.raises(DomainError):
        ChainConfig(sweeps=10, burn_in=0, thin=0)


def _orders_up_to_four() -> list[tuple[int, int]]:
    return [(k, l) for k in range(5) for l in range(5) if 1 <= k + l <= 4]


@pytest.mark.parametrize("beta", [0.0, 0.5, 1.5])
def test_exact_sampler_moments_at_two_thousand_spins(beta: float) -> None:
    dist = exact.exact_pair_distribution(ModelParams(n_total=2000, n1=1000, n2=1000, beta=beta))
    table = exact.mixed_moment_table(dist, 4, 4, Scaling.SQRT_SPIN)
    batch = sampling.sample_exact(dist, 100_000, seed=42)
    for k, l in _orders_up_to_four():
        estimate, se = sampling.empirical_moments(batch, MomentQuery(k, l))
        assert abs(estimate - table[k, l]) <= 3 * se, (k, l, estimate, table[k, l], se)


@pytest.mark.parametrize("beta", [0.0, 0.5, 1.5])
def test_chain_moments_at_two_thousand_spins(beta: float) -> None:
    params = ModelParams(n_total=2000, n1=1000, n2=1000, beta=beta)
    table = exact.mixed_moment_table(exact.exact_pair_distribution(params), 4, 4, Scaling.SQRT_SPIN)
    batch = sampling.glauber_chain(params, ChainConfig(sweeps=11_000, burn_in=1_000, thin=10, seed=42))
    assert len(batch) == 1_000
    # a chain above beta = 1 stays in one phase, so only flip-invariant orders are comparable
    for k, l in _orders_up_to_four():
        if (k + l) % 2:
            continue
        estimate, se = sampling.empirical_moments(batch, MomentQuery(k, l))
        assert abs(estimate - table[k, l]) <= 3 * se, (k, l, estimate, table[k, l], se)


def test_chain_corner_frequencies_at_zero_beta() -> None:
    params = ModelParams(n_total=6, n1=2, n2=2, beta=0.0)
    batch = sampling.glauber_chain(params, ChainConfig(sweeps=40_000, burn_in=100, thin=10, seed=42))
    cells = (batch.draws[:, 0] + 2) // 2 * 3 + (batch.draws[:, 1] + 2) // 2
    observed = np.bincount(cells, minlength=9)
    marginal = stats.binom.pmf(np.arange(3), 2, 0.5)
    expected = np.outer(marginal, marginal).ravel() * len(batch)
    _, p_value = stats.chisquare(observed, expected)
    assert p_value > 1e-3


def test_chain_group_magnetizations_settle_near_one_phase() -> None:
    params = ModelParams(n_total=2000, n1=1000, n2=1000, beta=1.5)
    m = limits.solve_m(1.5)
    batch = sampling.glauber_chain(params, ChainConfig(sweeps=2_000, burn_in=500, thin=10, seed=42))
    x = batch.draws[:, 0] / params.n1
    y = batch.draws[:, 1] / params.n2
    near_up = (np.abs(x - m) < 0.05) & (np.abs(y - m) < 0.05)
    near_down = (np.abs(x + m) < 0.05) & (np.abs(y + m) < 0.05)
    assert np.mean(near_up | near_down) >= 0.9
