"""Exact finite-N two-group Curie-Weiss measure.

All weights live in log-space: exp(beta*N/2) overflows a double beyond N of a
few thousand. The remainder group (N3 = N - N1 - N2) is integrated out once
through the table g(t) over the partial magnetization t = s1 + s2, so a joint
table costs O(N1*N2 + N*(N1+N2)).
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import stats
from scipy.special import gammaln, logsumexp

from cw2lab import config
from cw2lab.domain.errors import CapacityError, DomainError
from cw2lab.domain.models import ModelParams, MomentQuery, PairDistribution, Scaling

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_SPINS = 24
G_TABLE_CHUNK = 512
_BRUTE_FORCE_CHUNK = 1 << 16


def log_boltzmann_weight(params: ModelParams, s_total: int) -> float:
    """-beta*H for a configuration with total magnetization s_total (J = 1)."""
    n = params.n_total
    if abs(s_total) > n or (s_total - n) % 2:
        raise DomainError(f"magnetization {s_total} is not reachable with {n} spins")
    return params.beta * s_total * s_total / (2 * n)


def magnetization_support(n: int) -> np.ndarray:
    return np.arange(-n, n + 1, 2, dtype=np.int64)


def log_binomials(n: int) -> np.ndarray:
    """log C(n, k) for k = 0..n, symmetric in k <-> n-k bit for bit."""
    k = np.arange(n + 1, dtype=np.float64)
    return gammaln(n + 1.0) - (gammaln(k + 1.0) + gammaln(n - k + 1.0))


def log_partition(params: ModelParams) -> float:
    n = params.n_total
    s = magnetization_support(n)
    return float(logsumexp(log_binomials(n) + params.beta * (s * s) / (2 * n)))


def exact_total_distribution(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Support and log-probabilities of the total magnetization S_N."""
    n = params.n_total
    s = magnetization_support(n)
    log_w = log_binomials(n) + params.beta * (s * s) / (2 * n)
    return s, log_w - logsumexp(log_w)


def _log_g_chunk(params: ModelParams, t: np.ndarray) -> np.ndarray:
    n = params.n_total
    n3 = params.n_rest
    if n3 == 0:
        return params.beta * (t * t) / (2 * n)
    s3 = magnetization_support(n3)
    shifted = t[:, None] + s3[None, :]
    terms = log_binomials(n3)[None, :] + params.beta * (shifted * shifted) / (2 * n)
    return logsumexp(terms, axis=1)


def log_g_table(params: ModelParams, *, workers: int | None = None) -> np.ndarray:
    """log g(t) for t = -(N1+N2), ..., N1+N2 in steps of 2.

    Only t >= 0 is computed; the negative half is mirrored so that
    g(t) = g(-t) holds exactly. Chunks have a fixed size and are merged in
    order, so the result does not depend on the worker count.
    """
    m = params.n1 + params.n2
    t_all = magnetization_support(m)
    start = (m + 1) // 2
    t_half = t_all[start:]
    chunks = [t_half[i : i + G_TABLE_CHUNK] for i in range(0, len(t_half), G_TABLE_CHUNK)]
    n_workers = workers or config.workers()
    if n_workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(lambda chunk: _log_g_chunk(params, chunk), chunks))
    else:
        parts = [_log_g_chunk(params, chunk) for chunk in chunks]
    half = np.concatenate(parts)

    table = np.empty(m + 1, dtype=np.float64)
    table[start:] = half
    table[:start] = table[m - np.arange(start)]
    return table


def exact_pair_distribution(
    params: ModelParams,
    *,
    workers: int | None = None,
    max_entries: int | None = None,
) -> PairDistribution:
    budget = max_entries or config.max_table_entries()
    entries = (params.n1 + 1) * (params.n2 + 1)
    if entries > budget:
        raise CapacityError(f"joint table needs {entries} entries, budget is {budget}")

    log_g = log_g_table(params, workers=workers)
    index_sum = np.add.outer(np.arange(params.n1 + 1), np.arange(params.n2 + 1))
    table = log_binomials(params.n1)[:, None] + log_binomials(params.n2)[None, :]
    table = table + log_g[index_sum]
    log_z = float(logsumexp(table))
    logger.info(
        "exact.distribution n_total=%s n1=%s n2=%s n_rest=%s beta=%s entries=%s log_z=%.6f",
        params.n_total,
        params.n1,
        params.n2,
        params.n_rest,
        params.beta,
        entries,
        log_z,
    )
    return PairDistribution(
        params=params,
        support1=magnetization_support(params.n1),
        support2=magnetization_support(params.n2),
        log_prob=table - log_z,
        log_z=log_z,
    )


def brute_force_pair_distribution(params: ModelParams) -> PairDistribution:
    """Sum the Gibbs weight over every configuration in {-1, 1}^N (test oracle)."""
    n = params.n_total
    if n > BRUTE_FORCE_MAX_SPINS:
        raise CapacityError(f"brute force is limited to {BRUTE_FORCE_MAX_SPINS} spins, got {n}")

    # weights relative to the all-up configuration stay in (0, 1]
    weights = np.zeros((params.n1 + 1, params.n2 + 1), dtype=np.float64)
    shifts = np.arange(n, dtype=np.int64)
    for start in range(0, 1 << n, _BRUTE_FORCE_CHUNK):
        codes = np.arange(start, min(start + _BRUTE_FORCE_CHUNK, 1 << n), dtype=np.int64)
        bits = (codes[:, None] >> shifts[None, :]) & 1
        up1 = bits[:, : params.n1].sum(axis=1)
        up2 = bits[:, params.n1 : params.n1 + params.n2].sum(axis=1)
        s = 2 * bits.sum(axis=1) - n
        w = np.exp(params.beta * (s * s - n * n) / (2 * n))
        np.add.at(weights, (up1, up2), w)

    log_w = np.log(weights) + params.beta * n / 2
    log_z = float(logsumexp(log_w))
    logger.debug("exact.brute_force n_total=%s n1=%s n2=%s beta=%s", n, params.n1, params.n2, params.beta)
    return PairDistribution(
        params=params,
        support1=magnetization_support(params.n1),
        support2=magnetization_support(params.n2),
        log_prob=log_w - log_z,
        log_z=log_z,
    )


def mixed_moment_exact(dist: PairDistribution, q: MomentQuery) -> float:
    """E[(S1/N1^gamma)^K (S2/N2^gamma)^L] under dist."""
    if q.order % 2:
        # P(s1, s2) = P(-s1, -s2) exactly
        return 0.0
    if q.order == 0:
        return 1.0
    params = dist.params
    x = dist.support1 / params.n1**q.gamma
    y = dist.support2 / params.n2**q.gamma
    return float(x**q.k_exp @ dist.probabilities() @ y**q.l_exp)


def mixed_moment_table(dist: PairDistribution, k_max: int, l_max: int, scaling: Scaling) -> np.ndarray:
    """mixed_moment_exact for every K <= k_max, L <= l_max from one pass over the table."""
    params = dist.params
    x = dist.support1 / params.n1**scaling.exponent
    y = dist.support2 / params.n2**scaling.exponent
    x_powers = x[None, :] ** np.arange(k_max + 1)[:, None]
    y_powers = y[None, :] ** np.arange(l_max + 1)[:, None]
    table = x_powers @ dist.probabilities() @ y_powers.T
    orders = np.add.outer(np.arange(k_max + 1), np.arange(l_max + 1))
    table[orders % 2 == 1] = 0.0
    table[0, 0] = 1.0
    return table


def spin_correlation_exact(params: ModelParams, order: int) -> float:
    """E(X_i1 ... X_im) for m = order distinct spins.

    Given S_N with D down spins, the number of down spins among m distinct
    sites is hypergeometric; the product of the m spins is (-1)^downs.
    """
    n = params.n_total
    if order < 0 or order > n:
        raise DomainError(f"order must lie in [0, {n}], got {order}")
    if order % 2:
        return 0.0
    s, log_p = exact_total_distribution(params)
    downs_total = (n - s) // 2
    downs = np.arange(order + 1)
    pmf = stats.hypergeom.pmf(downs[:, None], n, downs_total[None, :], order)
    conditional = ((-1.0) ** downs) @ pmf
    return float(np.exp(log_p) @ conditional)


def group_sizes(
    n_total: int,
    alpha1: float,
    alpha2: float,
    *,
    sublinear: bool = False,
) -> tuple[int, int]:
    """Group sizes floor(alpha*N); group 1 gets floor(sqrt(N)) in the sublinear regime."""
    n1 = math.isqrt(n_total) if sublinear else math.floor(alpha1 * n_total)
    n2 = math.floor(alpha2 * n_total)
    if n1 < 1 or n2 < 1:
        raise DomainError(
            f"N={n_total} with alpha1={alpha1} alpha2={alpha2} leaves an empty group"
        )
    if n1 + n2 > n_total:
        raise DomainError(f"N={n_total}: groups of {n1} and {n2} spins do not fit")
    return n1, n2
