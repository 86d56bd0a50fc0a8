"""Closed-form limiting objects of the two-group model."""

from __future__ import annotations

import math
from functools import lru_cache

from scipy import optimize
from scipy.special import gammaln

from cw2lab.domain.errors import CapacityError, DomainError
from cw2lab.domain.models import GaussianLimit, LlnLimit

SOLVE_M_LOWER = 1e-16
NEWTON_MAX_STEPS = 8
RESIDUAL_TOL = 1e-12
ISSERLIS_BRUTE_MAX_ORDER = 12


def double_factorial(n: int) -> int:
    """n!! with (-1)!! = 0!! = 1."""
    if n < -1:
        raise DomainError(f"double factorial is undefined for {n}")
    result = 1
    for factor in range(n, 1, -2):
        result *= factor
    return result


def beta_bar(beta: float) -> float:
    if beta < 0:
        raise DomainError(f"beta must be nonnegative, got {beta}")
    if beta >= 1:
        raise DomainError(f"no central limit theorem for beta >= 1 (got beta={beta})")
    return beta / (1.0 - beta)


def _residual(beta: float, x: float) -> float:
    return math.tanh(beta * x) - x


def solve_m(beta: float) -> float:
    """Spontaneous magnetization: the largest root of tanh(beta*x) = x."""
    if beta < 0:
        raise DomainError(f"beta must be nonnegative, got {beta}")
    if beta <= 1.0 or _residual(beta, SOLVE_M_LOWER) <= 0.0:
        return 0.0

    m = optimize.bisect(lambda x: _residual(beta, x), SOLVE_M_LOWER, 1.0, xtol=1e-14, rtol=1e-15)
    for _ in range(NEWTON_MAX_STEPS):
        f = _residual(beta, m)
        if abs(f) < RESIDUAL_TOL * 1e-2:
            break
        slope = beta / math.cosh(beta * m) ** 2 - 1.0
        if slope == 0.0:
            break
        candidate = m - f / slope
        if not 0.0 < candidate <= 1.0:
            break
        m = candidate
    return m


def lln_limit(beta: float) -> LlnLimit:
    m = solve_m(beta)
    if m == 0.0:
        return LlnLimit(m=0.0, atoms=(((0.0, 0.0), 1.0),))
    return LlnLimit(m=m, atoms=(((-m, -m), 0.5), ((m, m), 0.5)))


def uncoupled_lln_limit(beta: float) -> LlnLimit:
    """Limit of the group means when the two groups do not interact."""
    m = solve_m(beta)
    if m == 0.0:
        return LlnLimit(m=0.0, atoms=(((0.0, 0.0), 1.0),))
    corners = ((-m, -m), (-m, m), (m, -m), (m, m))
    return LlnLimit(m=m, atoms=tuple((corner, 0.25) for corner in corners))


def lln_moment(limit: LlnLimit, k: int, l: int) -> float:
    return math.fsum(mass * x**k * y**l for (x, y), mass in limit.atoms)


def gaussian_cov(alpha1: float, alpha2: float, beta: float) -> GaussianLimit:
    if alpha1 < 0 or alpha2 < 0 or alpha1 + alpha2 > 1 + 1e-12:
        raise DomainError(f"group fractions must be nonnegative with sum <= 1, got {alpha1}, {alpha2}")
    bb = beta_bar(beta)
    return GaussianLimit(
        c11=1.0 + alpha1 * bb,
        c12=math.sqrt(alpha1 * alpha2) * bb,
        c22=1.0 + alpha2 * bb,
        alpha1=alpha1,
        alpha2=alpha2,
        beta_bar=bb,
    )


def single_group_variance(beta: float) -> float:
    """Variance of S_N / sqrt(N) in the limit, 1/(1-beta)."""
    return 1.0 + beta_bar(beta)


def _even_coefficient(k_total: int, k: int) -> float:
    half = k_total // 2
    return math.factorial(k_total) / (
        math.factorial(2 * k) * math.factorial(half - k) * 2 ** (half - k)
    )


def _odd_coefficient(k_total: int, k: int) -> float:
    half = (k_total - 1) // 2
    return math.factorial(k_total) / (
        math.factorial(2 * k + 1) * math.factorial(half - k) * 2 ** (half - k)
    )


def closed_form_moment(k_exp: int, l_exp: int, alpha1: float, alpha2: float, beta: float) -> float:
    """Limit of E[(S1/sqrt(N1))^K (S2/sqrt(N2))^L] as a double series in alpha1, alpha2."""
    if k_exp < 0 or l_exp < 0:
        raise DomainError(f"exponents must be nonnegative, got K={k_exp} L={l_exp}")
    bb = beta_bar(beta)
    if (k_exp + l_exp) % 2:
        return 0.0

    terms: list[float] = []
    if k_exp % 2 == 0:
        for k in range(k_exp // 2 + 1):
            for l in range(l_exp // 2 + 1):
                terms.append(
                    _even_coefficient(k_exp, k)
                    * _even_coefficient(l_exp, l)
                    * double_factorial(2 * (k + l) - 1)
                    * bb ** (k + l)
                    * alpha1**k
                    * alpha2**l
                )
    else:
        for k in range((k_exp - 1) // 2 + 1):
            for l in range((l_exp - 1) // 2 + 1):
                terms.append(
                    _odd_coefficient(k_exp, k)
                    * _odd_coefficient(l_exp, l)
                    * double_factorial(2 * (k + l) + 1)
                    * bb ** (k + l + 1)
                    * alpha1 ** (k + 0.5)
                    * alpha2 ** (l + 0.5)
                )
    return math.fsum(terms)


def isserlis_moment(k_exp: int, l_exp: int, m20: float, m11: float, m02: float) -> float:
    """E[xi^K eta^L] of a centred bivariate normal from its second moments."""
    if k_exp < 0 or l_exp < 0:
        raise DomainError(f"exponents must be nonnegative, got K={k_exp} L={l_exp}")
    return _isserlis(k_exp, l_exp, float(m20), float(m11), float(m02))


@lru_cache(maxsize=4096)
def _isserlis(k: int, l: int, m20: float, m11: float, m02: float) -> float:
    if k < 0 or l < 0:
        return 0.0
    if l >= 2:
        # m_{K,L+2} = K m11 m_{K-1,L+1} + (L+1) m02 m_{K,L}
        base = l - 2
        return k * m11 * _isserlis(k - 1, base + 1, m20, m11, m02) + (base + 1) * m02 * _isserlis(
            k, base, m20, m11, m02
        )
    if k >= 2:
        # m_{K+2,L} = (K+1) m20 m_{K,L} + L m11 m_{K+1,L-1}
        base = k - 2
        return (base + 1) * m20 * _isserlis(base, l, m20, m11, m02) + l * m11 * _isserlis(
            base + 1, l - 1, m20, m11, m02
        )
    if k == 1 and l == 1:
        return m11
    if k == 0 and l == 0:
        return 1.0
    return 0.0


def _pairings(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        for pairing in _pairings(rest[:i] + rest[i + 1 :]):
            yield [(first, partner)] + pairing


def isserlis_brute(k_exp: int, l_exp: int, m20: float, m11: float, m02: float) -> float:
    """Sum over all pair partitions of K copies of xi and L copies of eta."""
    order = k_exp + l_exp
    if order > ISSERLIS_BRUTE_MAX_ORDER:
        raise CapacityError(f"pair-partition enumeration is limited to order {ISSERLIS_BRUTE_MAX_ORDER}")
    if order % 2:
        return 0.0
    cov = ((m20, m11), (m11, m02))
    kinds = [0] * k_exp + [1] * l_exp
    total = []
    for pairing in _pairings(list(range(order))):
        product = 1.0
        for a, b in pairing:
            product *= cov[kinds[a]][kinds[b]]
        total.append(product)
    return math.fsum(total)


def critical_moment(k_exp: int, l_exp: int, alpha1: float, alpha2: float) -> float:
    """Limit of E[(S1/N1^{3/4})^K (S2/N2^{3/4})^L] at beta = 1."""
    if k_exp < 0 or l_exp < 0:
        raise DomainError(f"exponents must be nonnegative, got K={k_exp} L={l_exp}")
    order = k_exp + l_exp
    if order % 2:
        return 0.0
    log_ratio = gammaln((order + 1) / 4) - gammaln(0.25)
    return 12.0 ** (order / 4) * math.exp(log_ratio) * alpha1 ** (k_exp / 4) * alpha2 ** (l_exp / 4)


def correlation_asymptotic(order: int, beta: float, n: int) -> float:
    """Leading behaviour of E(X_i1 ... X_im) for m = order distinct spins."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    bb = beta_bar(beta)
    if order % 2:
        return 0.0
    return double_factorial(order - 1) * bb ** (order // 2) * n ** (-order / 2)


def gaussian_moment(limit: GaussianLimit, k_exp: int, l_exp: int) -> float:
    return isserlis_moment(k_exp, l_exp, limit.c11, limit.c12, limit.c22)
