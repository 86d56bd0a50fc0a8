"""Samplers for (S1, S2): exact alias-table draws and a Metropolis spin chain.

Every generator is a Philox counter-based stream with an explicit seed, so
batches are reproducible across platforms and worker counts.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from cw2lab import config
from cw2lab.domain.errors import DomainError
from cw2lab.domain.models import ChainConfig, ModelParams, MomentQuery, PairDistribution, SampleBatch
from cw2lab.engine.kernels import metropolis_sweep

logger = logging.getLogger(__name__)

SHARD_SIZE = 1 << 16


def make_rng(seed: int) -> np.random.Generator:
    if seed < 0 or seed >= 1 << 64:
        raise DomainError(f"seed must be a nonnegative 64-bit integer, got {seed}")
    return np.random.Generator(np.random.Philox(seed))


class AliasTable:
    """Vose alias table over a flat discrete distribution; O(1) per draw."""

    def __init__(self, probabilities: np.ndarray) -> None:
        weights = np.asarray(probabilities, dtype=np.float64).ravel()
        total = weights.sum()
        if weights.size == 0 or total <= 0.0 or (weights < 0).any():
            raise DomainError("alias table needs nonnegative weights with positive total")
        size = weights.size
        scaled = (weights * (size / total)).tolist()

        prob = [0.0] * size
        alias = list(range(size))
        small = [i for i, w in enumerate(scaled) if w < 1.0]
        large = [i for i, w in enumerate(scaled) if w >= 1.0]
        while small and large:
            s = small.pop()
            g = large.pop()
            prob[s] = scaled[s]
            alias[s] = g
            scaled[g] -= 1.0 - scaled[s]
            if scaled[g] < 1.0:
                small.append(g)
            else:
                large.append(g)
        # leftovers are 1 up to rounding
        for i in large + small:
            prob[i] = 1.0

        self.prob = np.asarray(prob)
        self.alias = np.asarray(alias, dtype=np.int64)

    def __len__(self) -> int:
        return int(self.prob.size)

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        columns = rng.integers(0, len(self), size=size, dtype=np.int64)
        coins = rng.random(size)
        return np.where(coins < self.prob[columns], columns, self.alias[columns])


def sample_exact(
    dist: PairDistribution,
    n_draws: int,
    seed: int,
    *,
    workers: int | None = None,
) -> SampleBatch:
    """I.i.d. draws of (S1, S2); shard i of SHARD_SIZE draws uses seed XOR i."""
    if n_draws < 1:
        raise DomainError(f"n_draws must be positive, got {n_draws}")
    make_rng(seed)
    table = AliasTable(dist.probabilities())
    width = dist.support2.size
    sizes = [min(SHARD_SIZE, n_draws - start) for start in range(0, n_draws, SHARD_SIZE)]

    def draw_shard(index: int) -> np.ndarray:
        return table.draw(make_rng(seed ^ index), sizes[index])

    n_workers = workers or config.workers()
    if n_workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            shards = list(pool.map(draw_shard, range(len(sizes))))
    else:
        shards = [draw_shard(index) for index in range(len(sizes))]
    flat = np.concatenate(shards)

    rows, cols = np.divmod(flat, width)
    draws = np.column_stack((dist.support1[rows], dist.support2[cols]))
    logger.info(
        "sampling.exact n_total=%s beta=%s n_draws=%s shards=%s seed=%s",
        dist.params.n_total,
        dist.params.beta,
        n_draws,
        len(sizes),
        seed,
    )
    return SampleBatch(draws=draws, params=dist.params, seed=seed)


def glauber_chain(params: ModelParams, cfg: ChainConfig) -> SampleBatch:
    """Metropolis chain on {-1, 1}^N; one sweep is N proposals at uniform sites.

    Group 1 holds sites [0, N1), group 2 holds [N1, N1+N2), the rest is the
    remainder group. (S1, S2) is recorded every `thin` sweeps after burn-in.
    """
    rng = make_rng(cfg.seed)
    n = params.n_total
    spins = (rng.integers(0, 2, size=n, dtype=np.int8) * 2 - 1).astype(np.int8)
    group = np.zeros(n, dtype=np.int8)
    group[: params.n1] = 1
    group[params.n1 : params.n1 + params.n2] = 2

    s_total = int(spins.sum(dtype=np.int64))
    s1 = int(spins[: params.n1].sum(dtype=np.int64))
    s2 = int(spins[params.n1 : params.n1 + params.n2].sum(dtype=np.int64))
    beta_over_2n = params.beta / (2 * n)

    draws: list[tuple[int, int]] = []
    accepted_total = 0
    for sweep in range(1, cfg.sweeps + 1):
        sites = rng.integers(0, n, size=n, dtype=np.int64)
        uniforms = rng.random(n)
        s_total, s1, s2, accepted = metropolis_sweep(
            spins, group, sites, uniforms, s_total, s1, s2, beta_over_2n
        )
        accepted_total += accepted
        if sweep > cfg.burn_in and (sweep - cfg.burn_in) % cfg.thin == 0:
            draws.append((s1, s2))

    acceptance_rate = accepted_total / (cfg.sweeps * n)
    logger.info(
        "sampling.chain n_total=%s n1=%s n2=%s beta=%s sweeps=%s burn_in=%s thin=%s draws=%s acceptance=%.4f",
        n,
        params.n1,
        params.n2,
        params.beta,
        cfg.sweeps,
        cfg.burn_in,
        cfg.thin,
        len(draws),
        acceptance_rate,
    )
    return SampleBatch(
        draws=np.asarray(draws, dtype=np.int64).reshape(-1, 2),
        params=params,
        seed=cfg.seed,
        acceptance_rate=acceptance_rate,
    )


def empirical_moments(batch: SampleBatch, q: MomentQuery) -> tuple[float, float]:
    """Sample mean and standard error of the scaled monomial over the draws."""
    n = len(batch)
    if n == 0:
        raise DomainError("empirical moments need a nonempty batch")
    params = batch.params
    x = batch.draws[:, 0] / params.n1**q.gamma
    y = batch.draws[:, 1] / params.n2**q.gamma
    values = x**q.k_exp * y**q.l_exp
    estimate = float(values.mean())
    if n == 1:
        return estimate, 0.0
    return estimate, float(values.std(ddof=1) / math.sqrt(n))
