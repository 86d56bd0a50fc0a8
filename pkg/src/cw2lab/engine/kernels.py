from __future__ import annotations

import math

import numba
import numpy as np


@numba.njit(cache=True)
def metropolis_sweep(
    spins: np.ndarray,
    group: np.ndarray,
    sites: np.ndarray,
    uniforms: np.ndarray,
    s_total: int,
    s1: int,
    s2: int,
    beta_over_2n: float,
) -> tuple[int, int, int, int]:
    """Single-spin-flip Metropolis updates at the given sites.

    The energy only depends on the total magnetization, so each proposal
    costs O(1): flipping x changes S to S - 2x.
    """
    accepted = 0
    for t in range(sites.shape[0]):
        i = sites[t]
        x = spins[i]
        s_new = s_total - 2 * x
        log_ratio = beta_over_2n * (s_new * s_new - s_total * s_total)
        if log_ratio >= 0.0 or uniforms[t] < math.exp(log_ratio):
            spins[i] = -x
            s_total = s_new
            if group[i] == 1:
                s1 -= 2 * x
            elif group[i] == 2:
                s2 -= 2 * x
            accepted += 1
    return s_total, s1, s2, accepted
