"""Multiindex bookkeeping: profile vectors, the profile classes and w_L(r).

Everything here is exact integer arithmetic; counts such as N^L for N = 50,
L = 8 do not fit a double.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterator

from cw2lab.domain.errors import CapacityError, DomainError
from cw2lab.domain.models import MultiIndex, ProfileClass, ProfileVector

MAX_PROFILE_LENGTH = 20


def int_partitions(n: int, _pivot: int = 1) -> Iterator[tuple[int, ...]]:
    """Enumerates all integer partitions of n as nondecreasing tuples."""
    yield (n,)
    for i in range(_pivot, n // 2 + 1):
        for p in int_partitions(n - i, _pivot=i):
            yield (i,) + p


def partition_number(n: int) -> int:
    """p(n) by the coin-change recurrence, independent of int_partitions."""
    table = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            table[total] += table[total - part]
    return table[n]


def profile_of(idx: MultiIndex) -> ProfileVector:
    multiplicities = Counter(idx.entries)
    return ProfileVector.from_sparse(Counter(multiplicities.values()), idx.length)


def enumerate_profiles(l_total: int) -> tuple[ProfileVector, ...]:
    """All profiles of length L, one per integer partition of L."""
    if not 1 <= l_total <= MAX_PROFILE_LENGTH:
        raise CapacityError(f"profile length must lie in [1, {MAX_PROFILE_LENGTH}], got {l_total}")
    profiles = {
        ProfileVector.from_sparse(Counter(parts), l_total) for parts in int_partitions(l_total)
    }
    return tuple(sorted(profiles, key=lambda r: r.counts, reverse=True))


def classify_profile(r: ProfileVector, k: int) -> ProfileClass:
    repeated_often = any(count > 0 for count in r.counts[2:])
    return ProfileClass(
        k=k,
        in_pi_k=r.r(1) == k,
        in_pi_zero=not repeated_often,
        in_pi_plus=repeated_often,
    )


def w_count(r: ProfileVector, n: int) -> int:
    """Number of multiindices in {1..n}^L whose profile is r."""
    distinct = r.distinct
    if n < distinct:
        raise DomainError(f"profile needs {distinct} distinct indices, only {n} available")
    choose_indices = math.perm(n, distinct)
    for _, count in r.sparse:
        choose_indices //= math.factorial(count)
    arrangements = math.factorial(r.l_total)
    for l, count in r.sparse:
        arrangements //= math.factorial(l) ** count
    return choose_indices * arrangements


def profile_sum(l_total: int, n: int) -> int:
    """Sum of w_L(r) over every profile that fits n indices; equals n^L."""
    return sum(w_count(r, n) for r in enumerate_profiles(l_total) if r.distinct <= n)


def odd_multiplicity_count(r: ProfileVector) -> int:
    """Distinct indices occurring an odd number of times; X_i^2 = 1 removes the rest."""
    return sum(count for l, count in r.sparse if l % 2)
